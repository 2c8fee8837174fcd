//! A parameter sweep, from spec to CSV, entirely in memory.
//!
//! Sweeps group strategies and rounds-per-stage for eight agents on a small
//! generated batch with the stochastic mock, then prints the per-repetition
//! CSV rows and the mean ± std summaries. The same spec expressed as a TOML
//! file drives the `sweep` CLI subcommand.
//!
//! Run with: cargo run --example sweep_report

use groupdebate::backends::{BackendConfig, MockConfig, MockPolicyKind};
use groupdebate::core::{DebateMode, PromptStyle, TaskKind};
use groupdebate::harness::{sweep_grid, DataConfig, DataKind, SweepSpec};
use groupdebate::orchestrator::RunOptions;

fn main() {
    let spec = SweepSpec {
        modes: vec![DebateMode::Gd],
        agents: vec![8],
        strategies: vec![vec![4, 4], vec![2, 2, 2, 2]],
        group_counts: vec![],
        rounds: vec![4],
        intra_rounds: vec![1, 2],
        seeds: vec![0],
        repetitions: 3,
        task: TaskKind::Arithmetic,
        prompt_style: PromptStyle::Debate,
        parallel_cells: 4,
        data: DataConfig { kind: DataKind::Generate, count: 8, seed: 5, path: None },
        backend: BackendConfig {
            mock: MockConfig {
                policy: MockPolicyKind::SeededStochastic,
                output_tokens: 50,
                summary_tokens: 60,
                ..MockConfig::default()
            },
            ..BackendConfig::default()
        },
    };

    let report = sweep_grid(&spec, &RunOptions::default()).expect("sweep failed");
    println!("{}", report.to_csv_string().expect("csv"));

    println!("summaries (mean \u{00b1} sample std over repetitions):");
    for row in &report.summary {
        println!(
            "  {} M={} N={} T={} R={}: accuracy {:.2} \u{00b1} {:.2}, tokens {:.0} \u{00b1} {:.0}",
            row.mode,
            row.agents,
            row.group_count,
            row.total_rounds,
            row.intra_rounds,
            row.accuracy_mean,
            row.accuracy_std,
            row.total_tokens_mean,
            row.total_tokens_std
        );
    }
    assert!(!report.partial, "mock sweeps always complete");
}
