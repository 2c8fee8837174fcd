//! Debate execution engine.
//!
//! Runs one problem through a debate protocol against any backend, recording
//! every call in a token ledger and a transcript. Within a phase, response
//! calls are independent and may fan out across threads; a barrier separates
//! phases, and results are always assembled in agent-index (then
//! group-index) order, so a run is byte-identical whether or not it ran in
//! parallel.
//!
//! Protocols:
//! - Staged group debate: agents are shuffled into groups; rounds proceed in
//!   stages of R rounds. Round 1 is initial thinking; within a stage agents
//!   see their group peers' previous outputs; at each stage boundary every
//!   group is summarized, and the first round of the next stage feeds every
//!   agent the whole summary pool. Agents keep a fixed three-slot memory.
//! - Fully-connected debate: before every round after the first, each
//!   agent's view of the *other* agents' outputs is condensed by one summary
//!   call per agent; agents keep their full chat history. The forgetful
//!   variant keeps only the question, the agent's own last output, and the
//!   newest summary; the grouped variant runs the staged topology with
//!   full-history memory.
//! - Single-agent baselines: one chain-of-thought sample, majority vote over
//!   M independent samples, or iterative self-reflection.
//!
//! The run ends with a majority vote over the agents' final-round answers.

mod context;
pub mod ledger;
pub mod transcript;

pub use ledger::{LedgerEntry, Principal, TokenLedger};
pub use transcript::{CallRecord, DebateResult, Transcript};

use crate::backends::{AgentBackend, CallKind, CallMeta, Generation, Message, Role};
use crate::core::{
    build_schedule, extract_answer, majority_vote, partition_agents, AgentId, AgentMemory,
    CanonicalAnswer, DebateConfig, DebateMode, GroupId, GroupSummary, Incoming, PeerOutput,
    PhaseKind,
};
use crate::error::{Error, Result};
use crate::tasks::{Problem, PromptSet};

use context::{join_block, ContextBuilder};

/// Execution knobs that do not affect results.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Fan each phase's calls out across threads. Results are byte-identical
    /// either way; this only changes wall time.
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { parallel: true }
    }
}

/// How much of the past an agent's context carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Retention {
    /// Fixed three slots: question, own latest output, incoming buffer.
    Slots,
    /// Append-only chat history.
    History,
}

struct AgentState {
    memory: AgentMemory,
    /// Chat so far (question first, system excluded); maintained only under
    /// history retention.
    history: Vec<Message>,
}

impl AgentState {
    fn new(agent: AgentId, starting: &str) -> Self {
        AgentState {
            memory: AgentMemory::new(agent, starting.to_string()),
            history: vec![Message::new(Role::User, starting)],
        }
    }
}

/// One planned backend call with its ledger stamps.
struct CallSpec {
    meta: CallMeta,
    context: Vec<Message>,
    principal: Principal,
    round: u32,
    stage: u32,
    phase: PhaseKind,
}

/// Run one problem under whatever mode the config selects.
pub fn run(
    config: &DebateConfig,
    problem: &Problem,
    backend: &dyn AgentBackend,
    options: &RunOptions,
) -> Result<DebateResult> {
    match config.mode {
        DebateMode::Gd => run_debate(config, problem, backend, options),
        DebateMode::Mad | DebateMode::MadForget | DebateMode::MadGroup => {
            run_mad(config, problem, backend, options)
        }
        DebateMode::SingleCot | DebateMode::CotSc => {
            run_samples(config, problem, backend, options)
        }
        DebateMode::Reflection => run_reflection(config, problem, backend, options),
    }
}

/// Run the staged group-debate protocol.
pub fn run_debate(
    config: &DebateConfig,
    problem: &Problem,
    backend: &dyn AgentBackend,
    options: &RunOptions,
) -> Result<DebateResult> {
    if config.mode != DebateMode::Gd {
        return Err(Error::config(format!(
            "run_debate drives the staged group protocol; mode is {}",
            config.mode
        )));
    }
    run_grouped(config, problem, backend, options, Retention::Slots)
}

/// Run the fully-connected protocol or one of its variants.
pub fn run_mad(
    config: &DebateConfig,
    problem: &Problem,
    backend: &dyn AgentBackend,
    options: &RunOptions,
) -> Result<DebateResult> {
    match config.mode {
        DebateMode::Mad => {
            run_fully_connected(config, problem, backend, options, Retention::History)
        }
        DebateMode::MadForget => {
            run_fully_connected(config, problem, backend, options, Retention::Slots)
        }
        DebateMode::MadGroup => {
            run_grouped(config, problem, backend, options, Retention::History)
        }
        other => Err(Error::config(format!(
            "run_mad drives the fully-connected family; mode is {other}"
        ))),
    }
}

fn run_grouped(
    config: &DebateConfig,
    problem: &Problem,
    backend: &dyn AgentBackend,
    options: &RunOptions,
    retention: Retention,
) -> Result<DebateResult> {
    config.validate()?;
    let prompts = PromptSet::for_style(config.prompt_style);
    let builder = ContextBuilder::new(prompts, problem)?;
    let assignment = partition_agents(config.agents, &config.groups(), config.seed)?;
    let schedule = build_schedule(config.total_rounds, config.intra_rounds)?;
    let m = config.agents as usize;

    let mut agents: Vec<AgentState> = (0..m)
        .map(|i| AgentState::new(AgentId(i), builder.starting()))
        .collect();
    let mut ledger = TokenLedger::default();
    let mut transcript = Transcript::default();

    for entry in schedule.entries() {
        // Response phase: one call per agent, contexts frozen before any
        // call runs.
        let mut specs = Vec::with_capacity(m);
        let mut user_msgs: Vec<Option<Message>> = Vec::with_capacity(m);
        for (i, state) in agents.iter().enumerate() {
            let (context, user_msg) = match entry.phase {
                PhaseKind::InitialThinking => (builder.initial(), None),
                PhaseKind::IntraGroup => {
                    let peers: &[PeerOutput] = match &state.memory.incoming {
                        Incoming::Peers(p) => p,
                        _ => &[],
                    };
                    let user = Message::new(Role::User, builder.intra_user(peers)?);
                    let context = match retention {
                        Retention::Slots => {
                            builder.slots(&state.memory.own_output, user.content.clone())
                        }
                        Retention::History => builder.history(&state.history, Some(user.clone())),
                    };
                    (context, Some(user))
                }
                PhaseKind::InterGroup => {
                    let pool: &[GroupSummary] = match &state.memory.incoming {
                        Incoming::Pool(p) => p,
                        _ => &[],
                    };
                    let user = Message::new(Role::User, builder.inter_user(pool)?);
                    let context = match retention {
                        Retention::Slots => {
                            builder.slots(&state.memory.own_output, user.content.clone())
                        }
                        Retention::History => builder.history(&state.history, Some(user.clone())),
                    };
                    (context, Some(user))
                }
            };
            specs.push(CallSpec {
                meta: CallMeta {
                    kind: CallKind::Response,
                    round: entry.round as usize,
                    stage: entry.stage as usize,
                    agent: Some(i),
                    group: Some(assignment.group_of(AgentId(i)).0),
                    task: problem.task,
                    seed: config.seed,
                    truth: Some(problem.answer.clone()),
                },
                context,
                principal: Principal::Agent(i),
                round: entry.round,
                stage: entry.stage,
                phase: entry.phase,
            });
            user_msgs.push(user_msg);
        }
        let outputs = run_batch(backend, options, specs, &mut ledger, &mut transcript)?;
        for (i, output) in outputs.into_iter().enumerate() {
            if retention == Retention::History {
                if let Some(user) = user_msgs[i].take() {
                    agents[i].history.push(user);
                }
                agents[i].history.push(Message::new(Role::Assistant, output.clone()));
            }
            agents[i].memory.record_own(output);
        }

        if schedule.summary_follows(entry.round) {
            // Stage boundary: one summary call per group over its members'
            // outputs, then every agent receives the pool (own group first)
            // for the inter round.
            let mut specs = Vec::with_capacity(assignment.group_count());
            for g in 0..assignment.group_count() {
                let block = join_block(
                    &assignment
                        .members(GroupId(g))
                        .iter()
                        .map(|a| agents[a.0].memory.own_output.as_str())
                        .collect::<Vec<_>>(),
                );
                specs.push(CallSpec {
                    meta: CallMeta {
                        kind: CallKind::Summary,
                        round: (entry.round + 1) as usize,
                        stage: entry.stage as usize,
                        agent: None,
                        group: Some(g),
                        task: problem.task,
                        seed: config.seed,
                        truth: Some(problem.answer.clone()),
                    },
                    context: builder.summary(&block)?,
                    principal: Principal::Group(g),
                    round: entry.round + 1,
                    stage: entry.stage,
                    phase: PhaseKind::InterGroup,
                });
            }
            let summaries = run_batch(backend, options, specs, &mut ledger, &mut transcript)?;
            let pool: Vec<GroupSummary> = summaries
                .into_iter()
                .enumerate()
                .map(|(g, text)| GroupSummary { group: GroupId(g), stage: entry.stage, text })
                .collect();
            for (i, state) in agents.iter_mut().enumerate() {
                let own = assignment.group_of(AgentId(i)).0;
                let mut ordered = Vec::with_capacity(pool.len());
                ordered.push(pool[own].clone());
                ordered.extend(pool.iter().enumerate().filter(|&(g, _)| g != own).map(|(_, s)| s.clone()));
                state.memory.receive_pool(ordered);
            }
        } else if entry.round < schedule.total_rounds() {
            // Next round stays within the stage: distribute group peers'
            // outputs, ordered by agent index, self excluded.
            for g in 0..assignment.group_count() {
                let members = assignment.members(GroupId(g)).to_vec();
                for &a in &members {
                    let peers: Vec<PeerOutput> = members
                        .iter()
                        .filter(|&&b| b != a)
                        .map(|&b| PeerOutput {
                            agent: b,
                            text: agents[b.0].memory.own_output.clone(),
                        })
                        .collect();
                    agents[a.0].memory.receive_peers(peers);
                }
            }
        }
    }

    finish(config, problem, agents, ledger, transcript)
}

fn run_fully_connected(
    config: &DebateConfig,
    problem: &Problem,
    backend: &dyn AgentBackend,
    options: &RunOptions,
    retention: Retention,
) -> Result<DebateResult> {
    config.validate()?;
    let prompts = PromptSet::for_style(config.prompt_style);
    let builder = ContextBuilder::new(prompts, problem)?;
    let m = config.agents as usize;

    let mut agents: Vec<AgentState> = (0..m)
        .map(|i| AgentState::new(AgentId(i), builder.starting()))
        .collect();
    let mut ledger = TokenLedger::default();
    let mut transcript = Transcript::default();

    for round in 1..=config.total_rounds {
        // With one round per stage, the stage number is the round number.
        let stage = round;
        let phase = if round == 1 { PhaseKind::InitialThinking } else { PhaseKind::IntraGroup };

        let mut summaries: Vec<String> = Vec::new();
        if round > 1 {
            // One summary call per agent over the *other* agents' previous
            // outputs.
            let mut specs = Vec::with_capacity(m);
            for i in 0..m {
                let block = join_block(
                    &(0..m)
                        .filter(|&j| j != i)
                        .map(|j| agents[j].memory.own_output.as_str())
                        .collect::<Vec<_>>(),
                );
                specs.push(CallSpec {
                    meta: CallMeta {
                        kind: CallKind::Summary,
                        round: round as usize,
                        stage: stage as usize,
                        agent: Some(i),
                        group: None,
                        task: problem.task,
                        seed: config.seed,
                        truth: Some(problem.answer.clone()),
                    },
                    context: builder.summary(&block)?,
                    principal: Principal::Agent(i),
                    round,
                    stage,
                    phase,
                });
            }
            summaries = run_batch(backend, options, specs, &mut ledger, &mut transcript)?;
        }

        let mut specs = Vec::with_capacity(m);
        let mut user_msgs: Vec<Option<Message>> = Vec::with_capacity(m);
        for i in 0..m {
            let (context, user_msg) = if round == 1 {
                (builder.initial(), None)
            } else {
                let user = Message::new(Role::User, builder.intra_block_user(&summaries[i])?);
                let context = match retention {
                    Retention::Slots => {
                        builder.slots(&agents[i].memory.own_output, user.content.clone())
                    }
                    Retention::History => builder.history(&agents[i].history, Some(user.clone())),
                };
                (context, Some(user))
            };
            specs.push(CallSpec {
                meta: CallMeta {
                    kind: CallKind::Response,
                    round: round as usize,
                    stage: stage as usize,
                    agent: Some(i),
                    group: None,
                    task: problem.task,
                    seed: config.seed,
                    truth: Some(problem.answer.clone()),
                },
                context,
                principal: Principal::Agent(i),
                round,
                stage,
                phase,
            });
            user_msgs.push(user_msg);
        }
        let outputs = run_batch(backend, options, specs, &mut ledger, &mut transcript)?;
        for (i, output) in outputs.into_iter().enumerate() {
            if retention == Retention::History {
                if let Some(user) = user_msgs[i].take() {
                    agents[i].history.push(user);
                }
                agents[i].history.push(Message::new(Role::Assistant, output.clone()));
            }
            agents[i].memory.record_own(output);
        }
    }

    finish(config, problem, agents, ledger, transcript)
}

/// One chain-of-thought sample, or M independent samples with a vote.
fn run_samples(
    config: &DebateConfig,
    problem: &Problem,
    backend: &dyn AgentBackend,
    options: &RunOptions,
) -> Result<DebateResult> {
    config.validate()?;
    let prompts = PromptSet::for_style(config.prompt_style);
    let builder = ContextBuilder::new(prompts, problem)?;
    let m = config.agents as usize;

    let specs = (0..m)
        .map(|i| CallSpec {
            meta: CallMeta {
                kind: CallKind::Response,
                round: 1,
                stage: 1,
                agent: Some(i),
                group: None,
                task: problem.task,
                seed: config.seed,
                truth: Some(problem.answer.clone()),
            },
            context: builder.initial(),
            principal: Principal::Agent(i),
            round: 1,
            stage: 1,
            phase: PhaseKind::InitialThinking,
        })
        .collect();

    let mut ledger = TokenLedger::default();
    let mut transcript = Transcript::default();
    let outputs = run_batch(backend, options, specs, &mut ledger, &mut transcript)?;

    let per_agent_final: Vec<CanonicalAnswer> = outputs
        .iter()
        .map(|o| extract_answer(problem.task, o))
        .collect();
    let final_answer = majority_vote(&per_agent_final)?;
    Ok(DebateResult {
        problem_id: problem.id.clone(),
        mode: config.mode,
        per_agent_final,
        final_answer,
        api_calls: ledger.api_calls(),
        transcript,
        ledger,
    })
}

/// One agent answers, then re-examines its own answer T times with full
/// history.
fn run_reflection(
    config: &DebateConfig,
    problem: &Problem,
    backend: &dyn AgentBackend,
    options: &RunOptions,
) -> Result<DebateResult> {
    config.validate()?;
    let prompts = PromptSet::for_style(config.prompt_style);
    let builder = ContextBuilder::new(prompts, problem)?;

    let mut ledger = TokenLedger::default();
    let mut transcript = Transcript::default();
    let mut history = vec![Message::new(Role::User, builder.starting())];
    let mut latest = String::new();

    for round in 1..=config.total_rounds + 1 {
        let (context, user_msg) = if round == 1 {
            (builder.initial(), None)
        } else {
            let user = Message::new(Role::User, builder.reflect_user()?);
            (builder.history(&history, Some(user.clone())), Some(user))
        };
        let phase = if round == 1 { PhaseKind::InitialThinking } else { PhaseKind::IntraGroup };
        let specs = vec![CallSpec {
            meta: CallMeta {
                kind: CallKind::Response,
                round: round as usize,
                stage: round as usize,
                agent: Some(0),
                group: None,
                task: problem.task,
                seed: config.seed,
                truth: Some(problem.answer.clone()),
            },
            context,
            principal: Principal::Agent(0),
            round,
            stage: round,
            phase,
        }];
        let mut outputs = run_batch(backend, options, specs, &mut ledger, &mut transcript)?;
        latest = outputs.pop().expect("one call, one output");
        if let Some(user) = user_msg {
            history.push(user);
        }
        history.push(Message::new(Role::Assistant, latest.clone()));
    }

    let per_agent_final = vec![extract_answer(problem.task, &latest)];
    let final_answer = majority_vote(&per_agent_final)?;
    Ok(DebateResult {
        problem_id: problem.id.clone(),
        mode: config.mode,
        per_agent_final,
        final_answer,
        api_calls: ledger.api_calls(),
        transcript,
        ledger,
    })
}

/// Vote over the agents' final outputs and assemble the result.
fn finish(
    config: &DebateConfig,
    problem: &Problem,
    agents: Vec<AgentState>,
    ledger: TokenLedger,
    transcript: Transcript,
) -> Result<DebateResult> {
    let per_agent_final: Vec<CanonicalAnswer> = agents
        .iter()
        .map(|s| extract_answer(problem.task, &s.memory.own_output))
        .collect();
    let final_answer = majority_vote(&per_agent_final)?;
    Ok(DebateResult {
        problem_id: problem.id.clone(),
        mode: config.mode,
        per_agent_final,
        final_answer,
        api_calls: ledger.api_calls(),
        transcript,
        ledger,
    })
}

/// Execute one phase's calls — in parallel when asked — and record the
/// results in canonical order. On any failure the whole phase is still
/// drained, every success is recorded, and the run aborts carrying the
/// partial ledger; the error names the lowest-indexed failing call.
fn run_batch(
    backend: &dyn AgentBackend,
    options: &RunOptions,
    specs: Vec<CallSpec>,
    ledger: &mut TokenLedger,
    transcript: &mut Transcript,
) -> Result<Vec<String>> {
    let outcomes: Vec<Result<Generation>> = if options.parallel && specs.len() > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = specs
                .iter()
                .map(|spec| scope.spawn(move || backend.generate(&spec.context, &spec.meta)))
                .collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .unwrap_or_else(|_| Err(Error::Backend("worker thread panicked".into())))
                })
                .collect()
        })
    } else {
        specs
            .iter()
            .map(|spec| backend.generate(&spec.context, &spec.meta))
            .collect()
    };

    let mut outputs = Vec::with_capacity(specs.len());
    let mut failure: Option<(usize, Error)> = None;
    for (idx, outcome) in outcomes.into_iter().enumerate() {
        let spec = &specs[idx];
        match outcome {
            Ok(generation) => {
                ledger.push(LedgerEntry {
                    round: spec.round,
                    stage: spec.stage,
                    phase: spec.phase,
                    principal: spec.principal,
                    kind: spec.meta.kind,
                    prompt_tokens: generation.prompt_tokens,
                    completion_tokens: generation.completion_tokens,
                    estimated: generation.usage_estimated,
                });
                transcript.push(CallRecord {
                    round: spec.round,
                    stage: spec.stage,
                    phase: spec.phase,
                    principal: spec.principal,
                    kind: spec.meta.kind,
                    context: spec.context.clone(),
                    output: generation.text.clone(),
                });
                outputs.push(generation.text);
            }
            Err(e) => {
                if failure.is_none() {
                    failure = Some((idx, e));
                }
            }
        }
    }
    if let Some((idx, cause)) = failure {
        let spec = &specs[idx];
        return Err(Error::Aborted {
            round: spec.round,
            principal: spec.principal.to_string(),
            message: cause.to_string(),
            partial: Box::new(std::mem::take(ledger)),
        });
    }
    Ok(outputs)
}
