//! Experiment harness: config files, batch runs, sweeps, and cost tables.
//!
//! A single experiment is described by a TOML file with three sections —
//! `[debate]` (protocol parameters), `[data]` (generate problems or load a
//! JSONL file), and `[backend]` (mock or HTTP). [`run_experiment`] executes
//! every repetition over the whole problem batch and produces an
//! [`ExperimentReport`]: one row per repetition, plus mean ± sample standard
//! deviation summaries. [`sweep_grid`] does the same over a cartesian grid
//! of configurations, in a deterministic lexicographic cell order (mode,
//! then agents, then group strategy, then rounds, then rounds-per-stage,
//! then seed). [`cost_report`] tabulates the analytical cost model over an
//! axis without calling any backend.
//!
//! Failure policy is mark-and-continue: an aborted run contributes its
//! partial token spend to the row, is named in `failures`, is excluded from
//! accuracy, and flips the report's `partial` flag — partial results are
//! never silently averaged in. With a mock backend, a report generated twice
//! from the same file is byte-identical (wall time is reported as 0; a
//! deterministic run's timing is noise).

pub mod report;

pub use report::{mean_and_sample_std, ExperimentReport, ReportRow, SummaryRow};

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backends::{AgentBackend, BackendConfig, BackendKind};
use crate::core::{near_equal_split, DebateConfig, DebateMode, PromptStyle, TaskKind};
use crate::cost::{
    expected_api_calls, gd_cost_bound, gd_token_cost, mad_cost_bound, mad_token_cost,
    optimal_group_count, CostParams,
};
use crate::error::{Error, Result};
use crate::orchestrator::{run, RunOptions};
use crate::tasks::{gen_arithmetic, load_dataset, score_run, Problem};

/// Where a run's problems come from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    /// Seeded arithmetic generator (arithmetic task only).
    #[default]
    Generate,
    /// JSONL file of problems.
    File,
}

/// The `[data]` section: problem source for an experiment or sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataConfig {
    pub kind: DataKind,
    /// Problems to generate (generator only).
    pub count: usize,
    /// Generator seed, independent of the debate seed.
    pub seed: u64,
    /// Dataset path (file only).
    pub path: Option<String>,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig { kind: DataKind::Generate, count: 10, seed: 0, path: None }
    }
}

impl DataConfig {
    /// Produce the problem batch for `task`.
    pub fn load(&self, task: TaskKind) -> Result<Vec<Problem>> {
        let problems = match self.kind {
            DataKind::Generate => {
                if task != TaskKind::Arithmetic {
                    return Err(Error::config(format!(
                        "only arithmetic problems can be generated; supply a dataset file for {task}"
                    )));
                }
                if self.count == 0 {
                    return Err(Error::config("data.count must be at least 1"));
                }
                gen_arithmetic(self.count, self.seed)
            }
            DataKind::File => {
                let path = self.path.as_deref().ok_or_else(|| {
                    Error::config("data.kind is \"file\" but data.path is not set")
                })?;
                load_dataset(path, task)?
            }
        };
        if problems.is_empty() {
            return Err(Error::config("the dataset is empty; nothing to run"));
        }
        Ok(problems)
    }

    /// The `dataset` report column: the task name for generated data, the
    /// file stem for loaded data.
    pub fn label(&self, task: TaskKind) -> String {
        match (self.kind, self.path.as_deref()) {
            (DataKind::File, Some(path)) => Path::new(path)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.to_string()),
            _ => task.to_string(),
        }
    }
}

/// A whole experiment file: `[debate]`, `[data]`, `[backend]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub debate: DebateConfig,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub backend: BackendConfig,
}

impl ExperimentConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        let config: ExperimentConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        config.debate.validate()?;
        Ok(config)
    }
}

/// Run one experiment: every repetition over the whole problem batch.
/// Aborted runs are marked, never silently dropped; the report's `partial`
/// flag says whether everything completed.
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions) -> Result<ExperimentReport> {
    config.debate.validate()?;
    let problems = config.data.load(config.debate.task)?;
    let dataset = config.data.label(config.debate.task);
    let backend = config.backend.build()?;
    let measure_wall = config.backend.kind == BackendKind::Http;
    let (rows, failures) =
        run_cell(&config.debate, &dataset, &problems, backend.as_ref(), options, measure_wall)?;
    let mut report =
        ExperimentReport { partial: !failures.is_empty(), rows, failures, summary: Vec::new() };
    report.summarize();
    Ok(report)
}

/// [`run_experiment`] from a TOML file on disk.
pub fn run_experiment_file(path: impl AsRef<Path>, options: &RunOptions) -> Result<ExperimentReport> {
    run_experiment(&ExperimentConfig::from_path(path)?, options)
}

/// Execute one configuration cell: `repetitions` passes over the problem
/// batch, repetition r running with seed + r. Returns one report row per
/// repetition plus any failure notes.
fn run_cell(
    cell: &DebateConfig,
    dataset: &str,
    problems: &[Problem],
    backend: &dyn AgentBackend,
    options: &RunOptions,
    measure_wall: bool,
) -> Result<(Vec<ReportRow>, Vec<String>)> {
    let mut rows = Vec::with_capacity(cell.repetitions as usize);
    let mut failures = Vec::new();
    for repetition in 0..cell.repetitions {
        let mut run_config = cell.clone();
        run_config.seed = cell.seed + repetition as u64;
        let started = Instant::now();
        let mut prompt_tokens = 0u64;
        let mut completion_tokens = 0u64;
        let mut api_calls = 0u64;
        let mut estimated = false;
        let mut completed = Vec::with_capacity(problems.len());
        for problem in problems {
            match run(&run_config, problem, backend, options) {
                Ok(result) => {
                    prompt_tokens += result.ledger.prompt_total();
                    completion_tokens += result.ledger.completion_total();
                    api_calls += result.api_calls;
                    estimated |= result.ledger.any_estimated();
                    completed.push(result);
                }
                Err(Error::Aborted { round, principal, message, partial }) => {
                    // The tokens were spent; account for them, but never
                    // vote on a partial run.
                    prompt_tokens += partial.prompt_total();
                    completion_tokens += partial.completion_total();
                    api_calls += partial.api_calls();
                    estimated |= partial.any_estimated();
                    failures.push(format!(
                        "{dataset}/{id}: mode {mode} seed {seed} repetition {repetition} \
                         aborted at round {round} ({principal}): {message}",
                        id = problem.id,
                        mode = cell.mode,
                        seed = run_config.seed,
                    ));
                }
                Err(other) => {
                    failures.push(format!(
                        "{dataset}/{id}: mode {mode} seed {seed} repetition {repetition} \
                         failed: {other}",
                        id = problem.id,
                        mode = cell.mode,
                        seed = run_config.seed,
                    ));
                }
            }
        }
        let accuracy =
            if completed.is_empty() { 0.0 } else { score_run(problems, &completed)? };
        rows.push(ReportRow {
            dataset: dataset.to_string(),
            mode: cell.mode.to_string(),
            agents: cell.agents,
            group_count: cell.group_count(),
            total_rounds: cell.total_rounds,
            intra_rounds: cell.intra_rounds,
            stages: cell.stages(),
            seed: cell.seed,
            repetition,
            accuracy,
            prompt_tokens,
            completion_tokens,
            total_tokens: prompt_tokens + completion_tokens,
            api_calls,
            wall_ms: if measure_wall { started.elapsed().as_millis() as u64 } else { 0 },
            estimated_usage_flag: estimated,
        });
    }
    Ok((rows, failures))
}

/// A cartesian sweep over protocol parameters, with shared data and backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub modes: Vec<DebateMode>,
    pub agents: Vec<u32>,
    /// Explicit group-size lists; each cell uses the strategies whose sizes
    /// sum to its agent count. Mutually exclusive with `group_counts`.
    #[serde(default)]
    pub strategies: Vec<Vec<u32>>,
    /// Group counts expanded to near-equal splits (first `M mod N` groups
    /// take the extra agent). Mutually exclusive with `strategies`.
    #[serde(default)]
    pub group_counts: Vec<u32>,
    pub rounds: Vec<u32>,
    #[serde(default = "default_intra_axis")]
    pub intra_rounds: Vec<u32>,
    #[serde(default = "default_seed_axis")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default = "default_task")]
    pub task: TaskKind,
    #[serde(default)]
    pub prompt_style: PromptStyle,
    /// Cells run concurrently, up to this many at a time; row order is
    /// unaffected.
    #[serde(default = "default_parallel_cells")]
    pub parallel_cells: usize,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub backend: BackendConfig,
}

fn default_intra_axis() -> Vec<u32> {
    vec![1]
}

fn default_seed_axis() -> Vec<u64> {
    vec![0]
}

fn default_repetitions() -> u32 {
    1
}

fn default_task() -> TaskKind {
    TaskKind::Arithmetic
}

fn default_parallel_cells() -> usize {
    1
}

impl SweepSpec {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// Expand the grid into validated configs, in the deterministic cell
    /// order: mode, agents, strategy, rounds, rounds-per-stage, seed. Every
    /// cell is validated before anything runs. For ungrouped modes the
    /// strategy and rounds-per-stage axes collapse to a single cell each,
    /// so the grid holds no duplicate rows.
    pub fn cells(&self) -> Result<Vec<DebateConfig>> {
        for (axis, empty) in [
            ("modes", self.modes.is_empty()),
            ("agents", self.agents.is_empty()),
            ("rounds", self.rounds.is_empty()),
            ("intra_rounds", self.intra_rounds.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ] {
            if empty {
                return Err(Error::config(format!("sweep axis `{axis}` is empty")));
            }
        }
        if !self.strategies.is_empty() && !self.group_counts.is_empty() {
            return Err(Error::config(
                "set either `strategies` or `group_counts`, not both",
            ));
        }
        if self.repetitions == 0 {
            return Err(Error::config("repetitions must be at least 1"));
        }
        let mut cells = Vec::new();
        for &mode in &self.modes {
            for &agents in &self.agents {
                for sizes in self.strategies_for(mode, agents)? {
                    for &total_rounds in &self.rounds {
                        let intra: &[u32] =
                            if mode.is_grouped() { &self.intra_rounds } else { &[1] };
                        for &intra_rounds in intra {
                            for &seed in &self.seeds {
                                let config = DebateConfig {
                                    mode,
                                    agents,
                                    group_sizes: sizes.clone(),
                                    total_rounds,
                                    intra_rounds,
                                    seed,
                                    task: self.task,
                                    repetitions: self.repetitions,
                                    prompt_style: self.prompt_style,
                                };
                                config.validate().map_err(|e| {
                                    Error::config(format!(
                                        "invalid sweep cell (mode {mode}, M={agents}, \
                                         sizes {sizes:?}, T={total_rounds}, R={intra_rounds}): {e}"
                                    ))
                                })?;
                                cells.push(config);
                            }
                        }
                    }
                }
            }
        }
        Ok(cells)
    }

    fn strategies_for(&self, mode: DebateMode, agents: u32) -> Result<Vec<Vec<u32>>> {
        if !mode.is_grouped() {
            return Ok(vec![Vec::new()]);
        }
        if !self.group_counts.is_empty() {
            return self
                .group_counts
                .iter()
                .map(|&n| near_equal_split(agents, n))
                .collect();
        }
        if !self.strategies.is_empty() {
            let matching: Vec<Vec<u32>> = self
                .strategies
                .iter()
                .filter(|sizes| sizes.iter().sum::<u32>() == agents)
                .cloned()
                .collect();
            if matching.is_empty() {
                return Err(Error::config(format!(
                    "no group strategy sums to {agents} agents for mode {mode}"
                )));
            }
            return Ok(matching);
        }
        Err(Error::config(format!(
            "mode {mode} needs a grouping axis: set `strategies` or `group_counts`"
        )))
    }
}

/// Run every cell of a sweep. Cell failures are marked and the sweep
/// continues; rows keep the deterministic cell order regardless of
/// `parallel_cells`.
pub fn sweep_grid(spec: &SweepSpec, options: &RunOptions) -> Result<ExperimentReport> {
    let cells = spec.cells()?;
    let problems = spec.data.load(spec.task)?;
    let dataset = spec.data.label(spec.task);
    let backend = spec.backend.build()?;
    let backend = backend.as_ref();
    let measure_wall = spec.backend.kind == BackendKind::Http;

    let run_one = |cell: &DebateConfig| {
        run_cell(cell, &dataset, &problems, backend, options, measure_wall)
    };
    let outcomes: Vec<Result<(Vec<ReportRow>, Vec<String>)>> = if spec.parallel_cells > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.parallel_cells)
            .build()
            .map_err(|e| Error::config(format!("could not build the sweep thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(run_one).collect())
    } else {
        cells.iter().map(run_one).collect()
    };

    let mut report = ExperimentReport::default();
    for (cell, outcome) in cells.iter().zip(outcomes) {
        match outcome {
            Ok((rows, failures)) => {
                report.partial |= !failures.is_empty();
                report.rows.extend(rows);
                report.failures.extend(failures);
            }
            Err(e) => {
                report.partial = true;
                report.failures.push(format!(
                    "cell (mode {}, M={}, sizes {:?}, T={}, R={}, seed {}) failed: {e}",
                    cell.mode, cell.agents, cell.group_sizes, cell.total_rounds,
                    cell.intra_rounds, cell.seed
                ));
            }
        }
    }
    report.summarize();
    Ok(report)
}

/// An axis of analytical cost-model evaluations; no backend involved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostAxis {
    pub agents: Vec<u64>,
    #[serde(default = "default_cost_groups")]
    pub group_counts: Vec<u64>,
    pub rounds: Vec<u64>,
    #[serde(default = "default_cost_intra")]
    pub intra_rounds: Vec<u64>,
    #[serde(default = "default_question_tokens")]
    pub question_tokens: u64,
    #[serde(default = "default_output_tokens")]
    pub output_tokens: u64,
    #[serde(default = "default_summary_tokens")]
    pub summary_tokens: u64,
}

fn default_cost_groups() -> Vec<u64> {
    vec![2]
}

fn default_cost_intra() -> Vec<u64> {
    vec![2]
}

fn default_question_tokens() -> u64 {
    100
}

fn default_output_tokens() -> u64 {
    50
}

fn default_summary_tokens() -> u64 {
    60
}

impl CostAxis {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

/// One analytical point: both protocols' totals, their bounds, and the
/// optimal group count at these shape parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    #[serde(rename = "M")]
    pub agents: u64,
    #[serde(rename = "N")]
    pub group_count: u64,
    #[serde(rename = "T")]
    pub total_rounds: u64,
    #[serde(rename = "R")]
    pub intra_rounds: u64,
    #[serde(rename = "S")]
    pub stages: u64,
    #[serde(rename = "Q")]
    pub question_tokens: u64,
    #[serde(rename = "o")]
    pub output_tokens: u64,
    #[serde(rename = "m")]
    pub summary_tokens: u64,
    pub mad_total: u64,
    pub gd_total: u64,
    pub mad_bound: u64,
    pub gd_bound: u64,
    pub gd_api_calls: u64,
    pub mad_api_calls: u64,
    pub n_star: u64,
    pub n_heuristic: u64,
}

/// Evaluate the analytical model over the axis, lexicographically (agents,
/// group count, rounds, rounds-per-stage). Group counts expand to
/// near-equal splits.
pub fn cost_report(axis: &CostAxis) -> Result<Vec<CostRow>> {
    for (name, empty) in [
        ("agents", axis.agents.is_empty()),
        ("group_counts", axis.group_counts.is_empty()),
        ("rounds", axis.rounds.is_empty()),
        ("intra_rounds", axis.intra_rounds.is_empty()),
    ] {
        if empty {
            return Err(Error::config(format!("cost axis `{name}` is empty")));
        }
    }
    let mut rows = Vec::new();
    for &agents in &axis.agents {
        for &group_count in &axis.group_counts {
            let small: u32 = agents.try_into().map_err(|_| {
                Error::config(format!("agent count {agents} is out of range"))
            })?;
            let n_small: u32 = group_count.try_into().map_err(|_| {
                Error::config(format!("group count {group_count} is out of range"))
            })?;
            let sizes: Vec<u64> =
                near_equal_split(small, n_small)?.into_iter().map(u64::from).collect();
            for &total_rounds in &axis.rounds {
                for &intra_rounds in &axis.intra_rounds {
                    let params = CostParams {
                        agents,
                        group_sizes: sizes.clone(),
                        total_rounds,
                        intra_rounds,
                        question_tokens: axis.question_tokens,
                        output_tokens: axis.output_tokens,
                        summary_tokens: axis.summary_tokens,
                    };
                    params.validate()?;
                    let stages = params.stages();
                    let (n_star, n_heuristic) = optimal_group_count(
                        agents,
                        total_rounds,
                        stages,
                        axis.output_tokens,
                        axis.summary_tokens,
                    );
                    rows.push(CostRow {
                        agents,
                        group_count,
                        total_rounds,
                        intra_rounds,
                        stages,
                        question_tokens: axis.question_tokens,
                        output_tokens: axis.output_tokens,
                        summary_tokens: axis.summary_tokens,
                        mad_total: mad_token_cost(&params).total,
                        gd_total: gd_token_cost(&params).total,
                        mad_bound: mad_cost_bound(&params),
                        gd_bound: gd_cost_bound(&params),
                        gd_api_calls: expected_api_calls(
                            DebateMode::Gd,
                            agents,
                            group_count,
                            total_rounds,
                            intra_rounds,
                        ),
                        mad_api_calls: expected_api_calls(
                            DebateMode::Mad,
                            agents,
                            group_count,
                            total_rounds,
                            intra_rounds,
                        ),
                        n_star,
                        n_heuristic,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Serialize cost rows as CSV with a header row.
pub fn cost_rows_to_csv(rows: &[CostRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::config(format!("csv serialization failed: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::config(format!("csv flush failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::config(format!("csv was not utf-8: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::{BackendConfig, MockConfig, MockPolicyKind};

    fn mock_experiment(mode: DebateMode, agents: u32, sizes: &[u32], rounds: u32, intra: u32) -> ExperimentConfig {
        ExperimentConfig {
            debate: DebateConfig {
                mode,
                agents,
                group_sizes: sizes.to_vec(),
                total_rounds: rounds,
                intra_rounds: intra,
                seed: 7,
                task: TaskKind::Arithmetic,
                repetitions: 2,
                prompt_style: PromptStyle::Debate,
            },
            data: DataConfig { kind: DataKind::Generate, count: 3, seed: 0, path: None },
            backend: BackendConfig::default(),
        }
    }

    #[test]
    fn experiment_report_reproduces_api_call_counts() {
        let report = run_experiment(
            &mock_experiment(DebateMode::Gd, 5, &[3, 2], 3, 2),
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(report.rows.len(), 2);
        // Three problems per repetition, 17 calls each.
        for row in &report.rows {
            assert_eq!(row.api_calls, 3 * 17);
            assert_eq!(row.wall_ms, 0);
            assert!(!row.estimated_usage_flag);
        }
        assert!(!report.partial);
        assert_eq!(report.summary.len(), 1);
        assert_eq!(report.summary[0].repetitions, 2);

        let mad = run_experiment(
            &mock_experiment(DebateMode::Mad, 5, &[], 3, 1),
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(mad.rows[0].api_calls, 3 * 25);
    }

    #[test]
    fn report_totals_equal_ledger_totals() {
        let config = mock_experiment(DebateMode::Gd, 4, &[2, 2], 4, 2);
        let report = run_experiment(&config, &RunOptions::default()).unwrap();
        let problems = config.data.load(TaskKind::Arithmetic).unwrap();
        let backend = config.backend.build().unwrap();
        let mut expected_total = 0;
        let mut cfg = config.debate.clone();
        cfg.seed = config.debate.seed; // repetition 0
        for problem in &problems {
            let result = run(&cfg, problem, backend.as_ref(), &RunOptions::default()).unwrap();
            expected_total += result.ledger.grand_total();
        }
        assert_eq!(report.rows[0].total_tokens, expected_total);
    }

    #[test]
    fn mock_reports_are_byte_identical_across_runs() {
        let config = mock_experiment(DebateMode::Gd, 4, &[2, 2], 3, 2);
        let a = run_experiment(&config, &RunOptions::default()).unwrap();
        let b = run_experiment(&config, &RunOptions { parallel: false }).unwrap();
        assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
        assert_eq!(a.to_json_string().unwrap(), b.to_json_string().unwrap());
    }

    #[test]
    fn scripted_majority_gives_perfect_accuracy() {
        let mut config = mock_experiment(DebateMode::Gd, 5, &[3, 2], 3, 2);
        config.backend = BackendConfig {
            mock: MockConfig {
                policy: MockPolicyKind::Scripted,
                correct_agents: vec![0, 2, 4],
                ..MockConfig::default()
            },
            ..BackendConfig::default()
        };
        let report = run_experiment(&config, &RunOptions::default()).unwrap();
        for row in &report.rows {
            assert_eq!(row.accuracy, 1.0);
        }
    }

    fn mock_sweep() -> SweepSpec {
        // Realistically sized mock outputs, so structural cost differences
        // dominate the fixed prompt-template overhead.
        let backend = BackendConfig {
            mock: MockConfig { output_tokens: 50, summary_tokens: 60, ..MockConfig::default() },
            ..BackendConfig::default()
        };
        SweepSpec {
            modes: vec![DebateMode::Gd],
            agents: vec![8],
            strategies: vec![vec![4, 4], vec![2, 2, 2, 2]],
            group_counts: vec![],
            rounds: vec![4],
            intra_rounds: vec![2],
            seeds: vec![0],
            repetitions: 1,
            task: TaskKind::Arithmetic,
            prompt_style: PromptStyle::Debate,
            parallel_cells: 1,
            data: DataConfig { kind: DataKind::Generate, count: 2, seed: 0, path: None },
            backend,
        }
    }

    #[test]
    fn sweep_orders_cells_and_more_groups_cost_less() {
        let report = sweep_grid(&mock_sweep(), &RunOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].group_count, 2);
        assert_eq!(report.rows[1].group_count, 4);
        assert!(
            report.rows[1].total_tokens < report.rows[0].total_tokens,
            "more groups must lower the total"
        );
        assert!(!report.partial);
    }

    #[test]
    fn sweep_tokens_decrease_as_intra_rounds_grow() {
        let mut spec = mock_sweep();
        spec.strategies = vec![vec![2, 2]];
        spec.agents = vec![4];
        spec.intra_rounds = vec![1, 2, 4];
        let report = sweep_grid(&spec, &RunOptions::default()).unwrap();
        let totals: Vec<u64> = report.rows.iter().map(|r| r.total_tokens).collect();
        assert_eq!(report.rows.len(), 3);
        assert!(totals[0] > totals[1] && totals[1] > totals[2], "{totals:?}");
    }

    #[test]
    fn parallel_sweep_matches_sequential_sweep() {
        let mut spec = mock_sweep();
        spec.agents = vec![4, 8];
        spec.strategies = vec![vec![2, 2], vec![4, 4], vec![2, 2, 2, 2]];
        let sequential = sweep_grid(&spec, &RunOptions::default()).unwrap();
        spec.parallel_cells = 4;
        let parallel = sweep_grid(&spec, &RunOptions::default()).unwrap();
        assert_eq!(
            sequential.to_csv_string().unwrap(),
            parallel.to_csv_string().unwrap()
        );
    }

    #[test]
    fn empty_axes_and_bad_strategies_fail_validation() {
        let mut spec = mock_sweep();
        spec.rounds = vec![];
        assert!(sweep_grid(&spec, &RunOptions::default()).is_err());

        let mut spec = mock_sweep();
        spec.agents = vec![5];
        // No strategy sums to 5.
        assert!(spec.cells().is_err());

        let mut spec = mock_sweep();
        spec.group_counts = vec![2];
        // Both grouping axes set at once.
        assert!(spec.cells().is_err());
    }

    #[test]
    fn ungrouped_modes_collapse_grouping_axes() {
        let mut spec = mock_sweep();
        spec.modes = vec![DebateMode::Mad];
        spec.agents = vec![4];
        spec.intra_rounds = vec![1, 2];
        let cells = spec.cells().unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].group_sizes, Vec::<u32>::new());
        assert_eq!(cells[0].intra_rounds, 1);
    }

    #[test]
    fn cost_report_evaluates_the_grid() {
        let axis = CostAxis {
            agents: vec![4, 5, 6, 7, 8],
            group_counts: vec![2],
            rounds: vec![4],
            intra_rounds: vec![2],
            question_tokens: 100,
            output_tokens: 50,
            summary_tokens: 60,
        };
        let rows = cost_report(&axis).unwrap();
        assert_eq!(rows.len(), 5);
        for row in &rows {
            assert!(row.gd_total < row.mad_total, "M={}", row.agents);
            assert!(row.mad_bound >= row.mad_total);
            assert!(row.gd_bound >= row.gd_total);
        }
        let csv = cost_rows_to_csv(&rows).unwrap();
        assert!(csv.starts_with("M,N,T,R,S,Q,o,m,"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn cost_report_single_point_degenerates() {
        let axis = CostAxis {
            agents: vec![1],
            group_counts: vec![1],
            rounds: vec![1],
            intra_rounds: vec![1],
            question_tokens: 10,
            output_tokens: 5,
            summary_tokens: 6,
        };
        let rows = cost_report(&axis).unwrap();
        assert_eq!(rows[0].mad_total, 15);
        assert_eq!(rows[0].gd_total, 15);
    }

    #[test]
    fn config_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("experiment.toml");
        std::fs::write(
            &path,
            r#"
[debate]
mode = "gd"
agents = 4
group_sizes = [2, 2]
total_rounds = 4
intra_rounds = 2
seed = 7
task = "arithmetic"

[data]
kind = "generate"
count = 2

[backend]
kind = "mock"
"#,
        )
        .unwrap();
        let config = ExperimentConfig::from_path(&path).unwrap();
        assert_eq!(config.debate.agents, 4);
        assert_eq!(config.data.count, 2);
        let report = run_experiment(&config, &RunOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].api_calls, 2 * 18);

        let bad = dir.path().join("bad.toml");
        std::fs::write(&bad, "[debate]\nmode = \"gd\"\nagents = 4\nunknown_field = 1\n").unwrap();
        match ExperimentConfig::from_path(&bad) {
            Err(Error::Parse { message, .. }) => {
                assert!(message.contains("unknown"), "{message}")
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn file_datasets_feed_experiments() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("probs.jsonl");
        crate::tasks::write_dataset(&path, &gen_arithmetic(4, 9)).unwrap();
        let data = DataConfig {
            kind: DataKind::File,
            count: 0,
            seed: 0,
            path: Some(path.display().to_string()),
        };
        assert_eq!(data.load(TaskKind::Arithmetic).unwrap().len(), 4);
        assert_eq!(data.label(TaskKind::Arithmetic), "probs");
    }
}
