//! One staged group debate, narrated call by call.
//!
//! Four agents in two groups of two debate an arithmetic problem for four
//! rounds in two stages. The example prints the schedule as it unfolds —
//! who spoke in which phase, what each call cost — and finishes with the
//! vote and the exact token bill.
//!
//! Run with: cargo run --example group_debate

use groupdebate::backends::{MockBackend, MockPolicy, ScriptTable, Tokenizer};
use groupdebate::core::{DebateConfig, DebateMode, PromptStyle, TaskKind};
use groupdebate::orchestrator::{run_debate, RunOptions};
use groupdebate::tasks::gen_arithmetic;

fn main() {
    let problems = gen_arithmetic(1, 42);
    let problem = &problems[0];
    let config = DebateConfig {
        mode: DebateMode::Gd,
        agents: 4,
        group_sizes: vec![2, 2],
        total_rounds: 4,
        intra_rounds: 2,
        seed: 7,
        task: TaskKind::Arithmetic,
        repetitions: 1,
        prompt_style: PromptStyle::Debate,
    };
    let backend = MockBackend::fixed(50, 60);
    let result = run_debate(&config, problem, &backend, &RunOptions::default())
        .expect("mock debates cannot fail");

    println!("question: {}", problem.question);
    println!(
        "protocol: {} agents in groups {:?}, {} rounds in stages of {}\n",
        config.agents, config.group_sizes, config.total_rounds, config.intra_rounds
    );

    let mut last_round = 0;
    for entry in &result.ledger.entries {
        if entry.round != last_round {
            println!("round {} ({})", entry.round, entry.phase);
            last_round = entry.round;
        }
        println!(
            "  {:<8} {:<8} prompt {:>4}  completion {:>3}",
            entry.principal.to_string(),
            format!("{:?}", entry.kind).to_lowercase(),
            entry.prompt_tokens,
            entry.completion_tokens
        );
    }

    println!();
    println!(
        "totals: {} prompt + {} completion = {} tokens over {} calls",
        result.ledger.prompt_total(),
        result.ledger.completion_total(),
        result.ledger.grand_total(),
        result.api_calls
    );

    // The fixed-length mock emits filler text, so its "answers" are noise.
    // Rerun the same schedule with a scripted backend — three agents answer
    // correctly, one holds out — to watch the vote resolve.
    let scripted = MockBackend::new(
        MockPolicy::Scripted(ScriptTable::correct_only(&[0, 1, 2])),
        Tokenizer::default(),
    );
    let voted = run_debate(&config, problem, &scripted, &RunOptions::default())
        .expect("mock debates cannot fail");
    println!();
    println!("rerun with scripted answers (agents 0-2 correct, agent 3 off):");
    println!(
        "  per-agent finals: {:?}",
        voted.per_agent_final.iter().map(|a| a.value.as_str()).collect::<Vec<_>>()
    );
    println!(
        "  majority vote: {}  (truth: {})",
        voted.final_answer.value,
        problem.answer
    );
}
