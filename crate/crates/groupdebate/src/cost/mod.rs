//! Analytical token-cost model.
//!
//! Pure closed-form accounting for what a debate run spends, round by round,
//! given constant per-response length `o`, constant per-summary length `m`,
//! and question length `Q`. Under a fixed-length mock backend with the
//! additive word tokenizer, the orchestrator's measured ledger reproduces
//! these numbers exactly — the engine and this module are two independent
//! routes to the same totals, and the test suite holds them equal with zero
//! tolerance.
//!
//! Conventions:
//! - A response call's cost is its prompt plus its completion.
//! - Summary costs are attached to the round that consumes the summaries
//!   (the first round of the following stage), not the round that produced
//!   the summarized outputs.
//! - All functions are pure and never allocate beyond their result.

use serde::{Deserialize, Serialize};

use crate::core::DebateMode;

/// Parameters of the analytical model.
///
/// `group_sizes` and `intra_rounds` only matter for staged group runs; an
/// empty `group_sizes` means a single group of all agents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostParams {
    /// M: number of agents.
    pub agents: u64,
    /// Group sizes; must sum to `agents` when non-empty.
    #[serde(default)]
    pub group_sizes: Vec<u64>,
    /// T: total debate rounds.
    pub total_rounds: u64,
    /// R: rounds per stage.
    #[serde(default = "default_intra_rounds")]
    pub intra_rounds: u64,
    /// Q: tokens in the question prompt.
    pub question_tokens: u64,
    /// o: tokens in every response.
    pub output_tokens: u64,
    /// m: tokens in every summary.
    #[serde(default)]
    pub summary_tokens: u64,
}

fn default_intra_rounds() -> u64 {
    1
}

impl CostParams {
    /// Group sizes with the single-group default applied.
    pub fn effective_sizes(&self) -> Vec<u64> {
        if self.group_sizes.is_empty() {
            vec![self.agents]
        } else {
            self.group_sizes.clone()
        }
    }

    /// N: number of groups.
    pub fn group_count(&self) -> u64 {
        self.effective_sizes().len() as u64
    }

    /// S: number of stages, ⌈T / R⌉.
    pub fn stages(&self) -> u64 {
        self.total_rounds.div_ceil(self.intra_rounds.max(1))
    }

    /// Check structural validity: positive counts where required and group
    /// sizes consistent with the agent count.
    pub fn validate(&self) -> crate::error::Result<()> {
        use crate::error::Error;
        if self.agents == 0 {
            return Err(Error::config("at least one agent is required"));
        }
        if self.total_rounds == 0 {
            return Err(Error::config("at least one round is required"));
        }
        if self.intra_rounds == 0 {
            return Err(Error::config("rounds per stage must be at least 1"));
        }
        if !self.group_sizes.is_empty() {
            let sum: u64 = self.group_sizes.iter().sum();
            if sum != self.agents {
                return Err(Error::config(format!(
                    "group sizes {:?} sum to {sum} but {} agents are configured",
                    self.group_sizes, self.agents
                )));
            }
            if self.group_sizes.contains(&0) {
                return Err(Error::config("group sizes must all be at least 1"));
            }
        }
        Ok(())
    }
}

/// Cost of one round: responses, plus any summaries consumed going into it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundCost {
    pub round: u64,
    pub response_cost: u64,
    pub summary_cost: u64,
}

/// Per-round costs and their grand total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenBreakdown {
    pub rounds: Vec<RoundCost>,
    pub total: u64,
}

impl TokenBreakdown {
    fn from_rounds(rounds: Vec<RoundCost>) -> Self {
        let total = rounds.iter().map(|r| r.response_cost + r.summary_cost).sum();
        TokenBreakdown { rounds, total }
    }

    /// Sum of response costs alone.
    pub fn response_total(&self) -> u64 {
        self.rounds.iter().map(|r| r.response_cost).sum()
    }

    /// Sum of summary costs alone.
    pub fn summary_total(&self) -> u64 {
        self.rounds.iter().map(|r| r.summary_cost).sum()
    }
}

/// Fully-connected debate cost, per round.
///
/// Round 1 costs M(Q + o). Before each later round t, every agent receives a
/// fresh summary of the other agents' latest outputs, costing
/// M((M−1)o + m); the round's responses then cost M((t−1)(o + m) + Q + o)
/// because each agent's chat history has accumulated t−1 (output, summary)
/// pairs on top of the question.
pub fn mad_token_cost(p: &CostParams) -> TokenBreakdown {
    let (mm, q, o, m) = (p.agents, p.question_tokens, p.output_tokens, p.summary_tokens);
    let rounds = (1..=p.total_rounds)
        .map(|t| RoundCost {
            round: t,
            response_cost: mm * ((t - 1) * (o + m) + q + o),
            summary_cost: if t == 1 { 0 } else { mm * ((mm - 1) * o + m) },
        })
        .collect();
    TokenBreakdown::from_rounds(rounds)
}

/// Fully-connected debate total computed by the incremental route: each
/// round's response cost exceeds the previous round's by M(o + m). Kept as
/// an independent code path; tests hold it equal to [`mad_token_cost`]
/// everywhere.
pub fn mad_token_cost_recurrence(p: &CostParams) -> u64 {
    let (mm, q, o, m) = (p.agents, p.question_tokens, p.output_tokens, p.summary_tokens);
    let mut response = mm * (q + o);
    let mut total = response;
    for _t in 2..=p.total_rounds {
        response += mm * (o + m);
        total += response + mm * ((mm - 1) * o + m);
    }
    total
}

/// Staged group debate cost, per round.
///
/// Round 1 costs M(Q + o). An intra-group round costs K(Q + K·o + o) in each
/// group of size K: every member's context is the question, its own last
/// output, and its K−1 peers' outputs. At each stage boundary every group is
/// summarized — Σ_j (K_j·o + m) — and the first round of the next stage costs
/// M(Q + 2o + N·m): question, own output, and all N group summaries.
pub fn gd_token_cost(p: &CostParams) -> TokenBreakdown {
    let sizes = p.effective_sizes();
    let n = sizes.len() as u64;
    let r = p.intra_rounds.max(1);
    let (mm, q, o, m) = (p.agents, p.question_tokens, p.output_tokens, p.summary_tokens);
    let rounds = (1..=p.total_rounds)
        .map(|t| {
            let (response_cost, summary_cost) = if t == 1 {
                (mm * (q + o), 0)
            } else if (t - 1) % r == 0 {
                (
                    mm * (q + 2 * o + n * m),
                    sizes.iter().map(|&k| k * o + m).sum(),
                )
            } else {
                (sizes.iter().map(|&k| k * (q + k * o + o)).sum(), 0)
            };
            RoundCost { round: t, response_cost, summary_cost }
        })
        .collect();
    TokenBreakdown::from_rounds(rounds)
}

/// Closed-form upper bound on the fully-connected total:
/// MTQ + 2M²T·o + (M²T + MT²)·m.
pub fn mad_cost_bound(p: &CostParams) -> u64 {
    let (mm, t, q, o, m) = (
        p.agents,
        p.total_rounds,
        p.question_tokens,
        p.output_tokens,
        p.summary_tokens,
    );
    mm * t * q + 2 * mm * mm * t * o + (mm * mm * t + mm * t * t) * m
}

/// Closed-form upper bound on the staged group total:
/// MTQ + ⌈2M²T·o / N⌉ + 2MSN·m.
///
/// The output term is rounded up so integer evaluation never undershoots.
/// Dominates [`gd_token_cost`] across standard operating ranges (two or more
/// agents); the one-agent, one-group, single-round-stage corner can exceed
/// it by a few summary tokens.
pub fn gd_cost_bound(p: &CostParams) -> u64 {
    let n = p.group_count().max(1);
    let s = p.stages();
    let (mm, t, q, o, m) = (
        p.agents,
        p.total_rounds,
        p.question_tokens,
        p.output_tokens,
        p.summary_tokens,
    );
    mm * t * q + (2 * mm * mm * t * o).div_ceil(n) + 2 * mm * s * n * m
}

/// Argmin over N ∈ [1, max_n] of ⌈p/n⌉ + g·n, ties to the smaller N.
fn argmin_bound(p: u64, g: u64, max_n: u64) -> u64 {
    let mut best_n = 1u64;
    let mut best = p + g;
    for n in 2..=max_n.max(1) {
        let cost = p.div_ceil(n) + g * n;
        if cost < best {
            best = cost;
            best_n = n;
        }
    }
    best_n
}

/// Pick the group count that minimizes the staged-group bound.
///
/// Returns `(n_star, n_heuristic)`: the exact argmin of the bound's
/// N-dependent part ⌈2M²T·o/N⌉ + 2MSN·m over N ∈ [1, M] (ties to the
/// smaller N), and the closed-form estimate round(√(M·T·o / (S·m))) clamped
/// to the same range. When summaries are free (m = 0) the heuristic is M —
/// more groups only cut response cost; when responses are free (o = 0) it
/// is 1.
pub fn optimal_group_count(
    agents: u64,
    total_rounds: u64,
    stages: u64,
    output_tokens: u64,
    summary_tokens: u64,
) -> (u64, u64) {
    let p = 2 * agents * agents * total_rounds * output_tokens;
    let g = 2 * agents * stages * summary_tokens;
    let n_star = argmin_bound(p, g, agents);
    let n_heuristic = if output_tokens == 0 {
        1
    } else if stages * summary_tokens == 0 {
        agents
    } else {
        let ratio = (agents * total_rounds * output_tokens) as f64
            / (stages * summary_tokens) as f64;
        (ratio.sqrt().round() as u64).clamp(1, agents.max(1))
    };
    (n_star, n_heuristic)
}

/// Number of backend calls a run makes. Staged group runs call once per
/// agent per round plus one summary per group per stage boundary; the
/// fully-connected variants add one summary per agent before every round
/// after the first.
pub fn expected_api_calls(
    mode: DebateMode,
    agents: u64,
    group_count: u64,
    total_rounds: u64,
    intra_rounds: u64,
) -> u64 {
    let stages = total_rounds.div_ceil(intra_rounds.max(1));
    match mode {
        DebateMode::Gd | DebateMode::MadGroup => {
            agents * total_rounds + group_count * (stages - 1)
        }
        DebateMode::Mad | DebateMode::MadForget => {
            agents * total_rounds + agents * (total_rounds - 1)
        }
        DebateMode::SingleCot => 1,
        DebateMode::CotSc => agents,
        DebateMode::Reflection => total_rounds + 1,
    }
}
