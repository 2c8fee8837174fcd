//! Debate configuration: the protocol-level knobs shared by every mode.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which debate protocol (or single-agent baseline) a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DebateMode {
    /// Staged group debate: agents are partitioned into groups, debate
    /// `intra_rounds` rounds inside their group, and exchange per-group
    /// summaries between stages.
    Gd,
    /// Flat debate: every round each agent receives a fresh summary of all
    /// *other* agents' previous-round responses and keeps its full history.
    Mad,
    /// Like [`DebateMode::Mad`] but the context keeps only the question, the
    /// agent's own previous output, and the latest summary.
    MadForget,
    /// Grouped topology (partition, stages, shared summary pool) combined
    /// with full-history memory.
    MadGroup,
    /// One agent, one call. `agents` must be 1; issues exactly 1 API call.
    SingleCot,
    /// Self-consistency: `agents` independent reasoning paths over the same
    /// question, majority-voted. Issues exactly `agents` API calls.
    CotSc,
    /// One agent refining its own answer: `total_rounds` refinement trials
    /// after the initial attempt, so exactly `total_rounds + 1` API calls.
    Reflection,
}

impl DebateMode {
    /// True for the modes that partition agents into groups and run the
    /// staged schedule (initial / intra / inter rounds).
    pub fn is_grouped(self) -> bool {
        matches!(self, DebateMode::Gd | DebateMode::MadGroup)
    }

    /// True for the modes where multiple agents debate over rounds.
    pub fn is_debate(self) -> bool {
        !matches!(
            self,
            DebateMode::SingleCot | DebateMode::CotSc | DebateMode::Reflection
        )
    }
}

impl std::fmt::Display for DebateMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DebateMode::Gd => "gd",
            DebateMode::Mad => "mad",
            DebateMode::MadForget => "mad_forget",
            DebateMode::MadGroup => "mad_group",
            DebateMode::SingleCot => "single_cot",
            DebateMode::CotSc => "cot_sc",
            DebateMode::Reflection => "reflection",
        };
        f.write_str(s)
    }
}

/// The benchmark family a question belongs to. Decides the starting-prompt
/// template, the output-format instruction, and the answer-extraction rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    /// Six-operand expressions `a+b*c+d-e*f`; answers are integers.
    Arithmetic,
    /// Grade-school word problems; answers arrive as `\boxed{...}`.
    Gsm8k,
    /// Four-choice questions; answers are a parenthesized letter A–D.
    Mmlu,
    /// Competition math; answers arrive as `\boxed{...}`.
    Math,
}

impl std::fmt::Display for TaskKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TaskKind::Arithmetic => "arithmetic",
            TaskKind::Gsm8k => "gsm8k",
            TaskKind::Mmlu => "mmlu",
            TaskKind::Math => "math",
        };
        f.write_str(s)
    }
}

/// Which template set prompts are rendered from.
///
/// `Debate` is the full template set (system prompt, debate instructions,
/// per-task output-format suffixes). `Bare` renders nothing but the raw
/// slots — the question, the outputs, the summaries — so that under the
/// additive tokenizer a run's measured token ledger matches the analytical
/// cost model term for term. Use `Bare` for cost calibration, `Debate` for
/// everything else.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptStyle {
    #[default]
    Debate,
    Bare,
}

/// Protocol parameters for one debate run.
///
/// `group_sizes` may be left empty, meaning a single group of all `agents`.
/// When non-empty it must sum to `agents`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DebateConfig {
    pub mode: DebateMode,
    /// M: number of agents (or reasoning paths for `cot_sc`).
    pub agents: u32,
    /// Group sizes, in group order. Empty means one group of `agents`.
    #[serde(default)]
    pub group_sizes: Vec<u32>,
    /// T: total debate rounds.
    pub total_rounds: u32,
    /// R: rounds per stage for the grouped modes. Stages S = ceil(T/R).
    #[serde(default = "default_intra_rounds")]
    pub intra_rounds: u32,
    /// Seed for the agent shuffle and all seeded mock behavior.
    pub seed: u64,
    pub task: TaskKind,
    /// Independent repetitions of the whole run (repetition r uses seed + r).
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default)]
    pub prompt_style: PromptStyle,
}

fn default_intra_rounds() -> u32 {
    1
}

fn default_repetitions() -> u32 {
    1
}

impl DebateConfig {
    /// Effective group sizes: the configured list, or a single group of all
    /// agents when the list is empty.
    pub fn groups(&self) -> Vec<u32> {
        if self.group_sizes.is_empty() {
            vec![self.agents]
        } else {
            self.group_sizes.clone()
        }
    }

    /// Number of groups N.
    pub fn group_count(&self) -> u32 {
        if self.group_sizes.is_empty() {
            1
        } else {
            self.group_sizes.len() as u32
        }
    }

    /// Number of stages S = ceil(T / R).
    pub fn stages(&self) -> u32 {
        self.total_rounds.div_ceil(self.intra_rounds)
    }

    /// Check every invariant, naming the offending values.
    pub fn validate(&self) -> Result<()> {
        if self.agents == 0 {
            return Err(Error::config("agents must be at least 1"));
        }
        if self.total_rounds == 0 {
            return Err(Error::config("total_rounds must be at least 1"));
        }
        if self.intra_rounds == 0 {
            return Err(Error::config("intra_rounds must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::config("repetitions must be at least 1"));
        }
        if !self.group_sizes.is_empty() {
            if self.group_sizes.contains(&0) {
                return Err(Error::config(format!(
                    "every group size must be at least 1, got {:?}",
                    self.group_sizes
                )));
            }
            let sum: u32 = self.group_sizes.iter().sum();
            if sum != self.agents {
                return Err(Error::Config(format!(
                    "group sizes {:?} sum to {} but {} agents are configured",
                    self.group_sizes, sum, self.agents
                )));
            }
        }
        if self.mode.is_grouped() && self.intra_rounds > self.total_rounds {
            return Err(Error::Config(format!(
                "intra_rounds {} exceeds total_rounds {} for mode {}",
                self.intra_rounds, self.total_rounds, self.mode
            )));
        }
        match self.mode {
            DebateMode::SingleCot | DebateMode::Reflection if self.agents != 1 => {
                Err(Error::Config(format!(
                    "mode {} runs a single agent; agents must be 1, got {}",
                    self.mode, self.agents
                )))
            }
            _ => Ok(()),
        }
    }
}
