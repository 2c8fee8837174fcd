//! Seeded partition of agents into debate groups.
//!
//! Agents are identified by index 0..M. The partition shuffles the indices
//! with a ChaCha8 generator seeded from the run seed (driving the rand
//! crate's Fisher–Yates shuffle) and deals the shuffled sequence into groups
//! of the configured sizes, so membership is random but fully reproducible
//! across platforms. Within a group, members are stored in ascending agent
//! index; every place that iterates "the group's agents" sees that order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An agent's identity: its index in 0..M.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct AgentId(pub usize);

impl std::fmt::Display for AgentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "agent {}", self.0)
    }
}

/// A group's identity: its index in 0..N.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct GroupId(pub usize);

impl std::fmt::Display for GroupId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "group {}", self.0)
    }
}

/// A disjoint cover of all M agents by N groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupAssignment {
    groups: Vec<Vec<AgentId>>,
    /// group index for each agent, indexed by agent id.
    membership: Vec<GroupId>,
}

impl GroupAssignment {
    /// All groups, each a sorted list of member ids.
    pub fn groups(&self) -> &[Vec<AgentId>] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn agent_count(&self) -> usize {
        self.membership.len()
    }

    /// Members of one group in ascending agent-index order.
    pub fn members(&self, g: GroupId) -> &[AgentId] {
        &self.groups[g.0]
    }

    /// The group an agent belongs to.
    pub fn group_of(&self, a: AgentId) -> GroupId {
        self.membership[a.0]
    }
}

/// Split `agents` agents into groups of the given sizes, shuffled by `seed`.
///
/// The sizes must be non-zero and sum to `agents`; the error names both
/// values when they disagree.
pub fn partition_agents(agents: u32, sizes: &[u32], seed: u64) -> Result<GroupAssignment> {
    if agents == 0 {
        return Err(Error::config("cannot partition zero agents"));
    }
    if sizes.is_empty() {
        return Err(Error::config("cannot partition into zero groups"));
    }
    if sizes.contains(&0) {
        return Err(Error::config(format!(
            "every group size must be at least 1, got {sizes:?}"
        )));
    }
    let sum: u32 = sizes.iter().sum();
    if sum != agents {
        return Err(Error::Config(format!(
            "group sizes {sizes:?} sum to {sum} but {agents} agents are configured"
        )));
    }

    let mut ids: Vec<usize> = (0..agents as usize).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);

    let mut groups = Vec::with_capacity(sizes.len());
    let mut cursor = 0usize;
    for &k in sizes {
        let mut members: Vec<AgentId> = ids[cursor..cursor + k as usize]
            .iter()
            .map(|&i| AgentId(i))
            .collect();
        members.sort();
        groups.push(members);
        cursor += k as usize;
    }

    let mut membership = vec![GroupId(0); agents as usize];
    for (g, members) in groups.iter().enumerate() {
        for &a in members {
            membership[a.0] = GroupId(g);
        }
    }
    Ok(GroupAssignment { groups, membership })
}

/// Near-equal split of `agents` into `group_count` groups: the first
/// `agents % group_count` groups take the extra member. (8, 2) → [4, 4];
/// (5, 2) → [3, 2].
pub fn near_equal_split(agents: u32, group_count: u32) -> Result<Vec<u32>> {
    if group_count == 0 || group_count > agents {
        return Err(Error::Config(format!(
            "cannot split {agents} agents into {group_count} groups"
        )));
    }
    let base = agents / group_count;
    let extra = agents % group_count;
    Ok((0..group_count)
        .map(|g| if g < extra { base + 1 } else { base })
        .collect())
}
