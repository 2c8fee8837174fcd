//! Deterministic mock backends.
//!
//! Every mock output is a pure function of (seed, agent/group, round/stage,
//! call kind): no interior mutability, no call ordering dependence. That is
//! what makes parallel and sequential runs byte-identical and lets tests
//! assert exact token ledgers.
//!
//! `FixedLength` outputs carry *sentinels* — unique whitespace-free markers
//! like `out:a2:r3:` — so tests can check which earlier outputs a prompt
//! context does and does not contain. The trailing colon matters: it keeps
//! `r1` from matching inside `r12`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::TaskKind;
use crate::error::{Error, Result};

use super::{
    AgentBackend, BackendConfig, CallKind, CallMeta, Generation, Message, MockConfig,
    MockPolicyKind, Tokenizer,
};

/// Sentinel for the response of `agent` in `round`.
pub fn output_sentinel(agent: usize, round: usize) -> String {
    format!("out:a{agent}:r{round}:")
}

/// Sentinel for the summary of `group` after `stage`.
pub fn summary_sentinel_group(group: usize, stage: usize) -> String {
    format!("sum:g{group}:s{stage}:")
}

/// Sentinel for the per-agent summary computed for `agent` before `round`.
pub fn summary_sentinel_agent(agent: usize, round: usize) -> String {
    format!("sum:a{agent}:r{round}:")
}

/// What a scripted agent answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnswerSpec {
    /// Answer with the ground truth from call metadata.
    Truth,
    /// Answer with a deterministic wrong value derived from the truth.
    Wrong,
    /// Answer with this literal text.
    Text(String),
}

/// Per-agent, per-round answer script. Most tests only need `default` plus a
/// few `per_agent` entries; `overrides` pins a single (agent, round) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptTable {
    pub default: AnswerSpec,
    pub per_agent: BTreeMap<usize, AnswerSpec>,
    pub overrides: BTreeMap<(usize, usize), AnswerSpec>,
}

impl ScriptTable {
    pub fn new(default: AnswerSpec) -> Self {
        ScriptTable { default, per_agent: BTreeMap::new(), overrides: BTreeMap::new() }
    }

    /// Script where `correct_agents` always answer the truth and everyone
    /// else answers wrong.
    pub fn correct_only(correct_agents: &[usize]) -> Self {
        let mut table = ScriptTable::new(AnswerSpec::Wrong);
        for &a in correct_agents {
            table.per_agent.insert(a, AnswerSpec::Truth);
        }
        table
    }

    fn spec_for(&self, agent: usize, round: usize) -> &AnswerSpec {
        self.overrides
            .get(&(agent, round))
            .or_else(|| self.per_agent.get(&agent))
            .unwrap_or(&self.default)
    }
}

/// The mock behavior families.
#[derive(Debug, Clone, PartialEq)]
pub enum MockPolicy {
    /// Sentinel-tagged outputs padded to exact counted lengths.
    FixedLength { output_tokens: u64, summary_tokens: u64 },
    /// Answers chosen per agent/round from a script.
    Scripted(ScriptTable),
    /// Seeded random initial correctness; wrong agents flip to the correct
    /// answer with probability `convergence` each round after the first.
    SeededStochastic { correct_probability: f64, convergence: f64 },
}

/// Deterministic in-process backend.
pub struct MockBackend {
    policy: MockPolicy,
    tokenizer: Tokenizer,
}

impl MockBackend {
    pub fn new(policy: MockPolicy, tokenizer: Tokenizer) -> Self {
        MockBackend { policy, tokenizer }
    }

    /// Fixed-length sentinel backend with the additive word counter — the
    /// configuration under which measured ledgers match the analytical model.
    pub fn fixed(output_tokens: u64, summary_tokens: u64) -> Self {
        MockBackend::new(
            MockPolicy::FixedLength { output_tokens, summary_tokens },
            Tokenizer::AdditiveWords,
        )
    }

    pub fn from_config(config: &BackendConfig) -> Result<Self> {
        let m: &MockConfig = &config.mock;
        let policy = match m.policy {
            MockPolicyKind::FixedLength => MockPolicy::FixedLength {
                output_tokens: m.output_tokens,
                summary_tokens: m.summary_tokens,
            },
            MockPolicyKind::Scripted => {
                MockPolicy::Scripted(ScriptTable::correct_only(&m.correct_agents))
            }
            MockPolicyKind::SeededStochastic => {
                for (name, p) in [
                    ("correct_probability", m.correct_probability),
                    ("convergence", m.convergence),
                ] {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::config(format!(
                            "{name} must be within [0, 1], got {p}"
                        )));
                    }
                }
                MockPolicy::SeededStochastic {
                    correct_probability: m.correct_probability,
                    convergence: m.convergence,
                }
            }
        };
        Ok(MockBackend::new(policy, config.tokenizer))
    }

    fn render_text(&self, meta: &CallMeta) -> String {
        match &self.policy {
            MockPolicy::FixedLength { output_tokens, summary_tokens } => {
                let (sentinel, target) = match meta.kind {
                    CallKind::Response => {
                        (output_sentinel(meta.agent.unwrap_or(0), meta.round), *output_tokens)
                    }
                    CallKind::Summary => {
                        let s = match (meta.group, meta.agent) {
                            (Some(g), None) => summary_sentinel_group(g, meta.stage),
                            (_, Some(a)) => summary_sentinel_agent(a, meta.round),
                            (None, None) => summary_sentinel_group(0, meta.stage),
                        };
                        (s, *summary_tokens)
                    }
                };
                pad_to(sentinel, target)
            }
            MockPolicy::Scripted(table) => match meta.kind {
                CallKind::Response => {
                    let agent = meta.agent.unwrap_or(0);
                    match table.spec_for(agent, meta.round) {
                        AnswerSpec::Truth => answer_text(meta, true),
                        AnswerSpec::Wrong => answer_text(meta, false),
                        AnswerSpec::Text(text) => text.clone(),
                    }
                }
                CallKind::Summary => summary_text(meta),
            },
            MockPolicy::SeededStochastic { correct_probability, convergence } => match meta.kind {
                CallKind::Response => {
                    let agent = meta.agent.unwrap_or(0);
                    let correct = (1..=meta.round).any(|r| {
                        let draw = draw_unit(meta.seed, agent, r);
                        if r == 1 {
                            draw < *correct_probability
                        } else {
                            draw < *convergence
                        }
                    });
                    answer_text(meta, correct)
                }
                CallKind::Summary => summary_text(meta),
            },
        }
    }
}

impl AgentBackend for MockBackend {
    fn generate(&self, context: &[Message], meta: &CallMeta) -> Result<Generation> {
        let text = self.render_text(meta);
        Ok(Generation {
            prompt_tokens: self.tokenizer.count_messages(context),
            completion_tokens: self.tokenizer.count(&text),
            text,
            usage_estimated: false,
        })
    }
}

/// Pad a whitespace-free marker with filler words to exactly `target` counted
/// units. A zero target yields empty text.
fn pad_to(sentinel: String, target: u64) -> String {
    if target == 0 {
        return String::new();
    }
    let mut words = Vec::with_capacity(target as usize);
    words.push(sentinel);
    while (words.len() as u64) < target {
        words.push("pad".to_string());
    }
    words.join(" ")
}

/// One uniform draw in [0, 1), a pure function of its inputs.
fn draw_unit(seed: u64, agent: usize, round: usize) -> f64 {
    let mut x = seed;
    for k in [agent as u64, round as u64, 0x9e37_79b9_7f4a_7c15] {
        x = splitmix64(x ^ k);
    }
    ChaCha8Rng::seed_from_u64(x).gen::<f64>()
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// A task-appropriate answer sentence carrying either the truth or a
/// deterministic wrong value distinct per agent.
fn answer_text(meta: &CallMeta, correct: bool) -> String {
    let agent = meta.agent.unwrap_or(0);
    let truth = meta.truth.as_deref().unwrap_or("0");
    let value = if correct { truth.to_string() } else { wrong_value(truth, agent, meta.task) };
    match meta.task {
        TaskKind::Arithmetic => format!(
            "Evaluating the expression term by term, my final answer is {value}"
        ),
        TaskKind::Gsm8k | TaskKind::Math => format!(
            "Working through the problem step by step, the result is \\boxed{{{value}}}"
        ),
        TaskKind::Mmlu => format!("Weighing each option carefully, I choose ({value})"),
    }
}

/// Derive a wrong answer from the truth: numeric truths are offset by
/// 1 + agent so wrong agents disagree with each other as well; letter choices
/// rotate; anything else gets a tagged fallback.
fn wrong_value(truth: &str, agent: usize, task: TaskKind) -> String {
    if task == TaskKind::Mmlu {
        let letters = ['A', 'B', 'C', 'D'];
        if let Some(pos) = truth
            .trim()
            .chars()
            .next()
            .map(|c| c.to_ascii_uppercase())
            .and_then(|c| letters.iter().position(|&l| l == c))
        {
            return letters[(pos + 1 + agent % 3) % 4].to_string();
        }
        return "A".to_string();
    }
    if let Ok(v) = truth.trim().parse::<i64>() {
        return (v + 1 + agent as i64).to_string();
    }
    if let Ok(v) = truth.trim().parse::<f64>() {
        return format!("{}", v + 1.0 + agent as f64);
    }
    format!("not-{truth}-{agent}")
}

fn summary_text(meta: &CallMeta) -> String {
    match (meta.group, meta.agent) {
        (Some(g), None) => format!(
            "Group {g} compared solutions after stage {}; members refined their reasoning.",
            meta.stage
        ),
        (_, Some(a)) => format!(
            "Summary prepared for agent {a} before round {}: peers compared their reasoning.",
            meta.round
        ),
        (None, None) => "Agents compared solutions and refined their reasoning.".to_string(),
    }
}
