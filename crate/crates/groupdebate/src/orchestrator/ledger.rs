//! Token accounting for a single run.
//!
//! Every backend call lands in the ledger as one entry with exact prompt and
//! completion counts. Summary entries are stamped with the *round they feed*
//! (the first round of the following stage), matching the analytical model's
//! convention, so a per-round comparison between the measured ledger and the
//! closed-form breakdown lines up row by row.

use serde::{Deserialize, Serialize};

use crate::backends::CallKind;
use crate::core::PhaseKind;
use crate::cost::{RoundCost, TokenBreakdown};

/// Who incurred a call: a responding agent or a group being summarized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Principal {
    Agent(usize),
    Group(usize),
}

impl std::fmt::Display for Principal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Principal::Agent(i) => write!(f, "agent {i}"),
            Principal::Group(g) => write!(f, "group {g}"),
        }
    }
}

/// One backend call's accounting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    /// Debate round this call belongs to; for summaries, the round they feed.
    pub round: u32,
    /// Stage the call's tokens were produced in.
    pub stage: u32,
    pub phase: PhaseKind,
    pub principal: Principal,
    pub kind: CallKind,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    /// True when the transport did not report usage and counts were
    /// estimated locally.
    pub estimated: bool,
}

impl LedgerEntry {
    pub fn total(&self) -> u64 {
        self.prompt_tokens + self.completion_tokens
    }
}

/// Ordered record of every call in one run. Entry order is canonical:
/// within a round, summaries precede responses, and each block is sorted by
/// principal index — so ledgers are byte-identical regardless of execution
/// parallelism.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenLedger {
    pub entries: Vec<LedgerEntry>,
}

impl TokenLedger {
    pub fn push(&mut self, entry: LedgerEntry) {
        self.entries.push(entry);
    }

    pub fn prompt_total(&self) -> u64 {
        self.entries.iter().map(|e| e.prompt_tokens).sum()
    }

    pub fn completion_total(&self) -> u64 {
        self.entries.iter().map(|e| e.completion_tokens).sum()
    }

    /// Grand total: prompt + completion over every call.
    pub fn grand_total(&self) -> u64 {
        self.entries.iter().map(|e| e.total()).sum()
    }

    /// One call, one entry.
    pub fn api_calls(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn any_estimated(&self) -> bool {
        self.entries.iter().any(|e| e.estimated)
    }

    /// Tokens spent by response calls alone.
    pub fn response_total(&self) -> u64 {
        self.kind_total(CallKind::Response)
    }

    /// Tokens spent by summary calls alone.
    pub fn summary_total(&self) -> u64 {
        self.kind_total(CallKind::Summary)
    }

    fn kind_total(&self, kind: CallKind) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.total())
            .sum()
    }

    /// Collapse the ledger into the same per-round shape the analytical
    /// model produces, for row-by-row comparison.
    pub fn breakdown(&self) -> TokenBreakdown {
        let max_round = self.entries.iter().map(|e| e.round).max().unwrap_or(0);
        let mut rounds: Vec<RoundCost> = (1..=max_round)
            .map(|round| RoundCost { round: round as u64, response_cost: 0, summary_cost: 0 })
            .collect();
        for e in &self.entries {
            let row = &mut rounds[(e.round - 1) as usize];
            match e.kind {
                CallKind::Response => row.response_cost += e.total(),
                CallKind::Summary => row.summary_cost += e.total(),
            }
        }
        let total = self.grand_total();
        TokenBreakdown { rounds, total }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(round: u32, kind: CallKind, prompt: u64, completion: u64) -> LedgerEntry {
        LedgerEntry {
            round,
            stage: 1,
            phase: PhaseKind::IntraGroup,
            principal: Principal::Agent(0),
            kind,
            prompt_tokens: prompt,
            completion_tokens: completion,
            estimated: false,
        }
    }

    #[test]
    fn totals_partition_by_kind() {
        let mut ledger = TokenLedger::default();
        ledger.push(entry(1, CallKind::Response, 10, 5));
        ledger.push(entry(2, CallKind::Summary, 10, 6));
        ledger.push(entry(2, CallKind::Response, 21, 5));
        assert_eq!(ledger.grand_total(), 57);
        assert_eq!(ledger.response_total(), 41);
        assert_eq!(ledger.summary_total(), 16);
        assert_eq!(ledger.prompt_total(), 41);
        assert_eq!(ledger.completion_total(), 16);
        assert_eq!(ledger.api_calls(), 3);
        assert!(!ledger.any_estimated());
    }

    #[test]
    fn breakdown_groups_by_round() {
        let mut ledger = TokenLedger::default();
        ledger.push(entry(1, CallKind::Response, 10, 5));
        ledger.push(entry(2, CallKind::Summary, 10, 6));
        ledger.push(entry(2, CallKind::Response, 21, 5));
        let b = ledger.breakdown();
        assert_eq!(b.total, 57);
        assert_eq!(b.rounds.len(), 2);
        assert_eq!(b.rounds[0].response_cost, 15);
        assert_eq!(b.rounds[0].summary_cost, 0);
        assert_eq!(b.rounds[1].response_cost, 26);
        assert_eq!(b.rounds[1].summary_cost, 16);
    }

    #[test]
    fn empty_ledger_is_all_zeroes() {
        let ledger = TokenLedger::default();
        assert_eq!(ledger.grand_total(), 0);
        assert_eq!(ledger.api_calls(), 0);
        assert!(ledger.breakdown().rounds.is_empty());
    }
}
