//! The fixed three-slot context an agent carries through a grouped debate.
//!
//! An agent remembers exactly three things: the question it was asked, its
//! own latest output, and whatever arrived since that output (its group
//! peers' last responses, or the stage summary pool). Incoming material is
//! always *replaced*, never appended — that bounded memory is what keeps the
//! grouped protocol's context from growing with the round number. After an
//! agent speaks, the incoming slot is reset to empty so the memory has the
//! same shape in every round.

use serde::Serialize;

use super::partition::{AgentId, GroupId};

/// One peer response delivered into an agent's incoming slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeerOutput {
    pub agent: AgentId,
    pub text: String,
}

/// One group's stage summary as shared through the pool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub group: GroupId,
    /// The stage whose discussion this summary condenses.
    pub stage: u32,
    pub text: String,
}

/// What currently sits in the incoming slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Incoming {
    /// Nothing has arrived since the agent last spoke.
    Empty,
    /// Previous-round outputs of the agent's group peers (self excluded),
    /// in ascending agent-index order.
    Peers(Vec<PeerOutput>),
    /// The full summary pool for a stage transition, own group first, the
    /// rest in group order.
    Pool(Vec<GroupSummary>),
}

/// The three-slot memory itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentMemory {
    pub agent: AgentId,
    /// The rendered starting prompt; constant for the whole debate.
    pub question: String,
    /// The agent's latest response; empty before round 1.
    pub own_output: String,
    pub incoming: Incoming,
}

impl AgentMemory {
    pub fn new(agent: AgentId, question: String) -> Self {
        AgentMemory {
            agent,
            question,
            own_output: String::new(),
            incoming: Incoming::Empty,
        }
    }

    /// Record the agent's fresh response and reset the incoming slot, keeping
    /// the memory's shape uniform across rounds.
    pub fn record_own(&mut self, output: String) {
        self.own_output = output;
        self.incoming = Incoming::Empty;
    }

    /// Replace the incoming slot with group peers' latest outputs.
    pub fn receive_peers(&mut self, peers: Vec<PeerOutput>) {
        debug_assert!(peers.iter().all(|p| p.agent != self.agent));
        self.incoming = Incoming::Peers(peers);
    }

    /// Replace the incoming slot with a stage's summary pool view.
    pub fn receive_pool(&mut self, pool: Vec<GroupSummary>) {
        self.incoming = Incoming::Pool(pool);
    }
}
