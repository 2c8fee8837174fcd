//! A real debate against a live chat-completions endpoint — if configured.
//!
//! Reads the endpoint settings from the environment and runs one small
//! grouped debate over HTTP. Without `OPENAI_API_KEY` set, it prints what
//! it would do and exits cleanly, so the example never fails in an offline
//! checkout.
//!
//! Run with: OPENAI_API_KEY=... cargo run --example live_endpoint
//! Optional: GROUPDEBATE_ENDPOINT and GROUPDEBATE_MODEL override the
//! OpenAI defaults.

use groupdebate::backends::{BackendConfig, BackendKind};
use groupdebate::core::{DebateConfig, DebateMode, PromptStyle, TaskKind};
use groupdebate::orchestrator::{run_debate, RunOptions};
use groupdebate::tasks::gen_arithmetic;

fn main() {
    let mut backend_config = BackendConfig { kind: BackendKind::Http, ..BackendConfig::default() };
    if let Ok(endpoint) = std::env::var("GROUPDEBATE_ENDPOINT") {
        backend_config.http.endpoint = endpoint;
    }
    if let Ok(model) = std::env::var("GROUPDEBATE_MODEL") {
        backend_config.http.model = model;
    }

    if std::env::var(&backend_config.http.api_key_env).is_err() {
        println!(
            "{} is not set; skipping the live run.",
            backend_config.http.api_key_env
        );
        println!(
            "With a key, this example debates one arithmetic problem with 4 agents \
             in two groups over 2 rounds against {}.",
            backend_config.http.endpoint
        );
        return;
    }

    let backend = backend_config.build().expect("backend construction failed");
    let problems = gen_arithmetic(1, 99);
    let config = DebateConfig {
        mode: DebateMode::Gd,
        agents: 4,
        group_sizes: vec![2, 2],
        total_rounds: 2,
        intra_rounds: 1,
        seed: 0,
        task: TaskKind::Arithmetic,
        repetitions: 1,
        prompt_style: PromptStyle::Debate,
    };

    match run_debate(&config, &problems[0], backend.as_ref(), &RunOptions::default()) {
        Ok(result) => {
            println!("question: {}", problems[0].question);
            println!("truth:    {}", problems[0].answer);
            println!("vote:     {}", result.final_answer.value);
            println!(
                "spent {} tokens over {} calls{}",
                result.ledger.grand_total(),
                result.api_calls,
                if result.ledger.any_estimated() { " (some usage estimated locally)" } else { "" }
            );
        }
        Err(e) => {
            eprintln!("live run failed: {e}");
            std::process::exit(1);
        }
    }
}
