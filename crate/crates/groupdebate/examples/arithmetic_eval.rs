//! Accuracy evaluation on generated arithmetic, mock edition.
//!
//! Generates a seeded problem batch, runs a grouped debate per problem with
//! the stochastic mock (agents start right with some probability and can be
//! talked into the right answer as rounds pass), and scores the majority
//! votes. Also shows the scripted mock pinning accuracy to exactly 1.0 when
//! a majority of agents is always right.
//!
//! Run with: cargo run --example arithmetic_eval

use groupdebate::backends::{MockBackend, MockPolicy, ScriptTable, Tokenizer};
use groupdebate::core::{DebateConfig, DebateMode, PromptStyle, TaskKind};
use groupdebate::orchestrator::{run, RunOptions};
use groupdebate::tasks::{gen_arithmetic, score_run};

fn main() {
    let problems = gen_arithmetic(40, 11);
    let config = DebateConfig {
        mode: DebateMode::Gd,
        agents: 5,
        group_sizes: vec![3, 2],
        total_rounds: 3,
        intra_rounds: 2,
        seed: 0,
        task: TaskKind::Arithmetic,
        repetitions: 1,
        prompt_style: PromptStyle::Debate,
    };

    // Stochastic agents: 50% start right, 35% convergence per later round.
    let stochastic = MockBackend::new(
        MockPolicy::SeededStochastic { correct_probability: 0.5, convergence: 0.35 },
        Tokenizer::AdditiveWords,
    );
    let results: Vec<_> = problems
        .iter()
        .map(|p| run(&config, p, &stochastic, &RunOptions::default()).expect("mock run failed"))
        .collect();
    let accuracy = score_run(&problems, &results).expect("scoring failed");
    let tokens: u64 = results.iter().map(|r| r.ledger.grand_total()).sum();
    println!(
        "stochastic mock: {} problems, accuracy {:.2}, {} total tokens",
        problems.len(),
        accuracy,
        tokens
    );

    // Scripted majority: agents 0, 2, 4 always right, so every vote lands.
    let scripted = MockBackend::new(
        MockPolicy::Scripted(ScriptTable::correct_only(&[0, 2, 4])),
        Tokenizer::AdditiveWords,
    );
    let results: Vec<_> = problems
        .iter()
        .map(|p| run(&config, p, &scripted, &RunOptions::default()).expect("mock run failed"))
        .collect();
    let accuracy = score_run(&problems, &results).expect("scoring failed");
    println!("scripted 3-of-5 majority: accuracy {accuracy:.2} (exactly 1.00 by construction)");
}
