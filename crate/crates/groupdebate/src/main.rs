//! Command-line front end: experiments, sweeps, cost tables, data generation.
//!
//! This binary is a thin shell over the library's harness module — parsing
//! arguments, reading config files, and writing reports. All logic lives in
//! the library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use groupdebate::harness::{
    cost_report, cost_rows_to_csv, run_experiment, sweep_grid, CostAxis, ExperimentConfig,
    ExperimentReport, SweepSpec,
};
use groupdebate::orchestrator::RunOptions;
use groupdebate::tasks::{gen_arithmetic, write_dataset};
use groupdebate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "groupdebate",
    version,
    about = "Cost-aware multi-agent debate: run experiments, sweep grids, tabulate token costs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Per-repetition rows with a header line.
    Csv,
    /// The whole report: rows, summaries, partial flag, failures.
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a TOML config file.
    Run {
        /// Config file with [debate], [data], and [backend] sections.
        #[arg(long)]
        config: PathBuf,
        /// Where to write the report; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Issue backend calls one at a time instead of per-phase fan-out.
        #[arg(long)]
        sequential: bool,
    },
    /// Run every cell of a parameter sweep.
    Sweep {
        /// Sweep spec file: axes plus shared [data] and [backend] sections.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        sequential: bool,
    },
    /// Tabulate the analytical cost model over an axis; no backend calls.
    Cost {
        /// Axis file: agents, group_counts, rounds, intra_rounds, and the
        /// Q/o/m calibration.
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Generate seeded arithmetic problems as a JSONL dataset.
    GenArith {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { config, out, format, sequential } => {
            let config = ExperimentConfig::from_path(&config)?;
            let options = RunOptions { parallel: !sequential };
            let report = run_experiment(&config, &options)?;
            emit_report(&report, format, out.as_deref())
        }
        Command::Sweep { spec, out, format, sequential } => {
            let spec = SweepSpec::from_path(&spec)?;
            let options = RunOptions { parallel: !sequential };
            let report = sweep_grid(&spec, &options)?;
            emit_report(&report, format, out.as_deref())
        }
        Command::Cost { params, out, format } => {
            let rows = cost_report(&CostAxis::from_path(&params)?)?;
            let text = match format {
                Format::Csv => cost_rows_to_csv(&rows)?,
                Format::Json => serde_json::to_string_pretty(&rows)
                    .map_err(|e| Error::config(format!("json serialization failed: {e}")))?,
            };
            write_out(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GenArith { seed, count, out } => {
            if count == 0 {
                return Err(Error::config("count must be at least 1"));
            }
            let problems = gen_arithmetic(count, seed);
            write_dataset(&out, &problems)?;
            eprintln!("wrote {} problems to {}", problems.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_report(report: &ExperimentReport, format: Format, out: Option<&Path>) -> Result<ExitCode> {
    let text = match format {
        Format::Csv => report.to_csv_string()?,
        Format::Json => report.to_json_string()?,
    };
    write_out(out, &text)?;
    if report.partial {
        eprintln!(
            "warning: {} run(s) did not complete; the report is partial",
            report.failures.len()
        );
        for failure in &report.failures {
            eprintln!("  {failure}");
        }
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::file(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
