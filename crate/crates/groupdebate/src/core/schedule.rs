//! The staged round schedule for grouped debate.
//!
//! T total rounds are split into S = ceil(T/R) stages of R rounds each (the
//! last stage may be short). Round 1 is initial thinking; the first round of
//! every later stage is an inter-group round driven by the previous stage's
//! summary pool; every other round is intra-group. A summary phase follows
//! the last round of every stage except the final one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What an agent is asked to do in a given round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    /// Round 1: answer the question from scratch.
    InitialThinking,
    /// Respond to the previous-round outputs of the agent's own group.
    IntraGroup,
    /// First round of stage s > 1: respond to the stage s−1 summary pool.
    InterGroup,
}

impl std::fmt::Display for PhaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PhaseKind::InitialThinking => "initial",
            PhaseKind::IntraGroup => "intra",
            PhaseKind::InterGroup => "inter",
        };
        f.write_str(s)
    }
}

/// One scheduled round: (round, stage, phase).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScheduleEntry {
    pub round: u32,
    pub stage: u32,
    pub phase: PhaseKind,
}

/// The full round plan for one debate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DebateSchedule {
    entries: Vec<ScheduleEntry>,
    total_rounds: u32,
    intra_rounds: u32,
    stages: u32,
}

impl DebateSchedule {
    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn total_rounds(&self) -> u32 {
        self.total_rounds
    }

    pub fn intra_rounds(&self) -> u32 {
        self.intra_rounds
    }

    /// S = ceil(T / R).
    pub fn stages(&self) -> u32 {
        self.stages
    }

    /// The stage a round belongs to (rounds and stages are 1-based).
    pub fn stage_of(&self, round: u32) -> u32 {
        (round - 1) / self.intra_rounds + 1
    }

    /// The last round of a stage: min(s·R, T).
    pub fn last_round_of_stage(&self, stage: u32) -> u32 {
        (stage * self.intra_rounds).min(self.total_rounds)
    }

    /// True when a per-group summary phase runs right after `round` (the
    /// round closes a stage and it is not the final stage).
    pub fn summary_follows(&self, round: u32) -> bool {
        let s = self.stage_of(round);
        s < self.stages && round == self.last_round_of_stage(s)
    }
}

/// Plan T rounds in stages of R. Requires 1 ≤ R ≤ T.
pub fn build_schedule(total_rounds: u32, intra_rounds: u32) -> Result<DebateSchedule> {
    if total_rounds == 0 {
        return Err(Error::config("total_rounds must be at least 1"));
    }
    if intra_rounds == 0 {
        return Err(Error::config("intra_rounds must be at least 1"));
    }
    if intra_rounds > total_rounds {
        return Err(Error::Config(format!(
            "intra_rounds {intra_rounds} exceeds total_rounds {total_rounds}"
        )));
    }
    let stages = total_rounds.div_ceil(intra_rounds);
    let entries = (1..=total_rounds)
        .map(|round| {
            let stage = (round - 1) / intra_rounds + 1;
            let phase = if round == 1 {
                PhaseKind::InitialThinking
            } else if stage > 1 && round == (stage - 1) * intra_rounds + 1 {
                PhaseKind::InterGroup
            } else {
                PhaseKind::IntraGroup
            };
            ScheduleEntry {
                round,
                stage,
                phase,
            }
        })
        .collect();
    Ok(DebateSchedule {
        entries,
        total_rounds,
        intra_rounds,
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phases(schedule: &DebateSchedule) -> Vec<(u32, u32, PhaseKind)> {
        schedule
            .entries()
            .iter()
            .map(|e| (e.round, e.stage, e.phase))
            .collect()
    }

    #[test]
    fn four_rounds_in_stages_of_two() {
        let s = build_schedule(4, 2).unwrap();
        assert_eq!(s.stages(), 2);
        assert_eq!(
            phases(&s),
            vec![
                (1, 1, PhaseKind::InitialThinking),
                (2, 1, PhaseKind::IntraGroup),
                (3, 2, PhaseKind::InterGroup),
                (4, 2, PhaseKind::IntraGroup),
            ]
        );
        assert!(s.summary_follows(2));
        assert!(!s.summary_follows(4), "final stage produces no summary");
    }

    #[test]
    fn single_round_is_initial_thinking_only() {
        let s = build_schedule(1, 1).unwrap();
        assert_eq!(phases(&s), vec![(1, 1, PhaseKind::InitialThinking)]);
        assert_eq!(s.stages(), 1);
        assert!(!s.summary_follows(1));
    }

    #[test]
    fn short_final_stage_still_opens_with_inter() {
        // T=5, R=2: stage 3 is the single round 5, entered through summaries.
        let s = build_schedule(5, 2).unwrap();
        assert_eq!(s.stages(), 3);
        assert_eq!(
            phases(&s)[4],
            (5, 3, PhaseKind::InterGroup),
            "round 5 must open stage 3"
        );
        assert!(s.summary_follows(2));
        assert!(s.summary_follows(4));
        assert!(!s.summary_follows(5));
    }

    #[test]
    fn intra_rounds_beyond_total_rejected() {
        assert!(build_schedule(2, 5).is_err());
        assert!(build_schedule(0, 1).is_err());
        assert!(build_schedule(3, 0).is_err());
    }

    #[test]
    fn single_stage_has_no_inter_rounds_and_no_summaries() {
        let s = build_schedule(4, 4).unwrap();
        assert_eq!(s.stages(), 1);
        for e in s.entries() {
            assert_ne!(e.phase, PhaseKind::InterGroup);
            assert!(!s.summary_follows(e.round));
        }
    }

    #[test]
    fn every_stage_beyond_the_first_opens_with_exactly_one_inter_round() {
        for t in 1..=12u32 {
            for r in 1..=t {
                let s = build_schedule(t, r).unwrap();
                for stage in 1..=s.stages() {
                    let inters: Vec<_> = s
                        .entries()
                        .iter()
                        .filter(|e| e.stage == stage && e.phase == PhaseKind::InterGroup)
                        .collect();
                    if stage == 1 {
                        assert!(inters.is_empty(), "T={t} R={r}: stage 1 has inter rounds");
                    } else {
                        assert_eq!(inters.len(), 1, "T={t} R={r} stage {stage}");
                        assert_eq!(inters[0].round, (stage - 1) * r + 1);
                    }
                }
                // Rounds partition into stages contiguously.
                for e in s.entries() {
                    assert_eq!(e.stage, s.stage_of(e.round));
                    assert!(e.round <= s.last_round_of_stage(e.stage));
                }
                // Summaries follow every stage but the last.
                let boundaries = s
                    .entries()
                    .iter()
                    .filter(|e| s.summary_follows(e.round))
                    .count() as u32;
                assert_eq!(boundaries, s.stages() - 1, "T={t} R={r}");
            }
        }
    }
}
