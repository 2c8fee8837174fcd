//! Cost-aware multi-agent debate for language models.
//!
//! This crate runs several LLM agents against one problem under different
//! debate protocols and accounts for every token they spend. Its centerpiece
//! is a staged group-debate protocol that trades a little coordination
//! overhead (per-group summaries) for a large reduction in the quadratic
//! message-passing cost of fully-connected debate, plus an analytical cost
//! model that predicts a run's token bill exactly — under the deterministic
//! mock backend, measured ledgers match the model token for token.
//!
//! The pieces:
//!
//! - [`core`]: configuration, agent/group identity and partitioning, the
//!   round/stage schedule, three-slot agent memory, and answer
//!   extraction/voting.
//! - [`orchestrator`]: the engine. [`orchestrator::run`] executes one
//!   problem and returns a [`orchestrator::DebateResult`] holding the final
//!   vote, a full transcript, and a per-call token ledger.
//! - [`backends`]: the [`backends::AgentBackend`] trait, a deterministic
//!   mock for experiments and tests, and a retrying HTTP client for
//!   OpenAI-style chat-completion endpoints.
//! - [`cost`]: closed-form token-cost formulas for both protocols, upper
//!   bounds, and the optimal-group-count rule derived from them.
//! - [`tasks`]: problems, prompt templates, dataset I/O, and the arithmetic
//!   task generator.
//! - [`harness`]: batch experiments, parameter sweeps, and CSV/JSON reports.
//!
//! # Example
//!
//! ```
//! use groupdebate::backends::MockBackend;
//! use groupdebate::core::{DebateConfig, DebateMode, PromptStyle, TaskKind};
//! use groupdebate::orchestrator::{run, RunOptions};
//! use groupdebate::tasks::gen_arithmetic;
//!
//! let problems = gen_arithmetic(1, 7);
//! let config = DebateConfig {
//!     mode: DebateMode::Gd,
//!     agents: 4,
//!     group_sizes: vec![2, 2],
//!     total_rounds: 4,
//!     intra_rounds: 2,
//!     seed: 7,
//!     task: TaskKind::Arithmetic,
//!     repetitions: 1,
//!     prompt_style: PromptStyle::Debate,
//! };
//! let backend = MockBackend::fixed(50, 60);
//! let result = run(&config, &problems[0], &backend, &RunOptions::default()).unwrap();
//! assert_eq!(result.api_calls, 18);
//! assert_eq!(result.ledger.api_calls(), 18);
//! ```

pub mod backends;
pub mod core;
pub mod cost;
pub mod error;
pub mod harness;
pub mod orchestrator;
pub mod tasks;

pub use error::{Error, Result};
