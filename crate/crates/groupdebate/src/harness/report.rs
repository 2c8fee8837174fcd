//! Report rows, aggregation, and CSV/JSON serialization.
//!
//! A report holds one row per (configuration, repetition) plus one summary
//! row per configuration aggregating over its repetitions (mean and sample
//! standard deviation). CSV output is the per-repetition rows with a
//! mandatory header; JSON output is the whole report — rows, summaries, the
//! partial flag, and any failure notes. Given the same config, seeds, and a
//! deterministic backend, serialization is byte-identical across runs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One (configuration, repetition) outcome. Token totals are the sums over
/// the repetition's whole problem batch and always equal the underlying
/// ledger totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// Task name for generated data, file stem for loaded data.
    pub dataset: String,
    pub mode: String,
    #[serde(rename = "M")]
    pub agents: u32,
    #[serde(rename = "N")]
    pub group_count: u32,
    #[serde(rename = "T")]
    pub total_rounds: u32,
    #[serde(rename = "R")]
    pub intra_rounds: u32,
    #[serde(rename = "S")]
    pub stages: u32,
    /// The configuration's base seed; repetition r actually runs seed + r.
    pub seed: u64,
    pub repetition: u32,
    pub accuracy: f64,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
    pub api_calls: u64,
    pub wall_ms: u64,
    /// True when any token count in the repetition was estimated locally
    /// rather than reported by the backend.
    pub estimated_usage_flag: bool,
}

/// Per-configuration aggregate over repetitions: mean ± sample standard
/// deviation, presentation-ready.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub mode: String,
    #[serde(rename = "M")]
    pub agents: u32,
    #[serde(rename = "N")]
    pub group_count: u32,
    #[serde(rename = "T")]
    pub total_rounds: u32,
    #[serde(rename = "R")]
    pub intra_rounds: u32,
    #[serde(rename = "S")]
    pub stages: u32,
    pub seed: u64,
    pub repetitions: u32,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub total_tokens_mean: f64,
    pub total_tokens_std: f64,
    pub api_calls: u64,
}

/// A full experiment or sweep outcome.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    pub summary: Vec<SummaryRow>,
    /// True when any run aborted; the rows still account for tokens spent
    /// before the abort, and `failures` names what went wrong.
    pub partial: bool,
    pub failures: Vec<String>,
}

impl ExperimentReport {
    /// Build summary rows by aggregating consecutive rows that share a
    /// configuration (everything but `repetition` and the measured
    /// outcomes).
    pub fn summarize(&mut self) {
        let mut summary = Vec::new();
        let mut i = 0;
        while i < self.rows.len() {
            let j = self.rows[i..]
                .iter()
                .take_while(|r| same_config(&self.rows[i], r))
                .count()
                + i;
            let cell = &self.rows[i..j];
            let (accuracy_mean, accuracy_std) =
                mean_and_sample_std(&cell.iter().map(|r| r.accuracy).collect::<Vec<_>>());
            let (tokens_mean, tokens_std) = mean_and_sample_std(
                &cell.iter().map(|r| r.total_tokens as f64).collect::<Vec<_>>(),
            );
            let first = &self.rows[i];
            summary.push(SummaryRow {
                dataset: first.dataset.clone(),
                mode: first.mode.clone(),
                agents: first.agents,
                group_count: first.group_count,
                total_rounds: first.total_rounds,
                intra_rounds: first.intra_rounds,
                stages: first.stages,
                seed: first.seed,
                repetitions: cell.len() as u32,
                accuracy_mean,
                accuracy_std,
                total_tokens_mean: tokens_mean,
                total_tokens_std: tokens_std,
                api_calls: first.api_calls,
            });
            i = j;
        }
        self.summary = summary;
    }

    /// Write the per-repetition rows as CSV, header first.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        for row in &self.rows {
            writer
                .serialize(row)
                .map_err(|e| Error::Backend(format!("csv serialization failed: {e}")))?;
        }
        writer
            .flush()
            .map_err(|e| Error::Backend(format!("csv flush failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Backend(format!("csv was not utf-8: {e}")))
    }

    /// Serialize the whole report — rows, summaries, partial flag, failures.
    pub fn to_json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Backend(format!("json serialization failed: {e}")))
    }
}

fn same_config(a: &ReportRow, b: &ReportRow) -> bool {
    a.dataset == b.dataset
        && a.mode == b.mode
        && a.agents == b.agents
        && a.group_count == b.group_count
        && a.total_rounds == b.total_rounds
        && a.intra_rounds == b.intra_rounds
        && a.seed == b.seed
}

/// Mean and sample standard deviation (n − 1 denominator; a single sample
/// has deviation 0).
pub fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
