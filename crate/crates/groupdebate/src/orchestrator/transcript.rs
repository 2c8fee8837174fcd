//! Full record of what every call saw and said, plus the run's result.

use serde::{Deserialize, Serialize};

use crate::backends::{CallKind, Message};
use crate::core::{CanonicalAnswer, DebateMode, PhaseKind};

use super::ledger::{Principal, TokenLedger};

/// One backend call: the exact serialized context and the output text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallRecord {
    pub round: u32,
    pub stage: u32,
    pub phase: PhaseKind,
    pub principal: Principal,
    pub kind: CallKind,
    /// The full message context sent to the backend, in wire order.
    pub context: Vec<Message>,
    pub output: String,
}

impl CallRecord {
    /// The context flattened to one string (message contents joined by
    /// blank lines), for substring checks and display.
    pub fn context_text(&self) -> String {
        self.context
            .iter()
            .map(|m| m.content.as_str())
            .collect::<Vec<_>>()
            .join("\n\n")
    }
}

/// Every call of a run, in canonical ledger order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub calls: Vec<CallRecord>,
}

impl Transcript {
    pub fn push(&mut self, record: CallRecord) {
        self.calls.push(record);
    }

    /// Calls belonging to one round, summaries (stamped with the round they
    /// feed) included.
    pub fn round(&self, round: u32) -> impl Iterator<Item = &CallRecord> {
        self.calls.iter().filter(move |c| c.round == round)
    }

    /// The response call a given agent made in a given round, if any.
    pub fn response_of(&self, agent: usize, round: u32) -> Option<&CallRecord> {
        self.calls.iter().find(|c| {
            c.round == round
                && c.kind == CallKind::Response
                && c.principal == Principal::Agent(agent)
        })
    }
}

/// Outcome of one debate over one problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DebateResult {
    pub problem_id: String,
    pub mode: DebateMode,
    /// Each agent's last-round answer, in agent-index order.
    pub per_agent_final: Vec<CanonicalAnswer>,
    /// Majority vote over `per_agent_final`.
    #[serde(rename = "final")]
    pub final_answer: CanonicalAnswer,
    /// Number of backend calls; always equals the ledger's entry count.
    pub api_calls: u64,
    pub transcript: Transcript,
    pub ledger: TokenLedger,
}
