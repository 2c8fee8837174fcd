//! Protocol vocabulary: configuration, partition, schedule, memory, answers.

mod answer;
mod config;
mod memory;
mod partition;
mod schedule;

pub use answer::{extract_answer, majority_vote, normalize, CanonicalAnswer, UNPARSEABLE};
pub use config::{DebateConfig, DebateMode, PromptStyle, TaskKind};
pub use memory::{AgentMemory, GroupSummary, Incoming, PeerOutput};
pub use partition::{near_equal_split, partition_agents, AgentId, GroupAssignment, GroupId};
pub use schedule::{build_schedule, DebateSchedule, PhaseKind, ScheduleEntry};
