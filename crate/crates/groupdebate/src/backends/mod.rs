//! Backend abstraction: how agents turn an assembled context into text.
//!
//! The orchestrator is backend-agnostic. It hands a backend the full message
//! context plus structured call metadata and receives text with exact token
//! usage. Mock backends make runs deterministic and are the basis for every
//! test in the crate; the HTTP backend speaks the common
//! chat-completions wire format for live runs.

pub mod http;
pub mod mock;
pub mod tokens;

use serde::{Deserialize, Serialize};

use crate::core::TaskKind;
use crate::error::Result;

pub use http::HttpBackend;
pub use mock::{MockBackend, MockPolicy, ScriptTable};
pub use tokens::Tokenizer;

/// Speaker of one message in a serialized context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    System,
    User,
    Assistant,
}

/// One message of an assembled context, in wire order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

impl Message {
    pub fn new(role: Role, content: impl Into<String>) -> Self {
        Message { role, content: content.into() }
    }
}

/// What kind of call this is, from the protocol's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CallKind {
    /// An agent producing (or revising) an answer.
    Response,
    /// A summarization call that condenses several outputs.
    Summary,
}

/// Structured metadata accompanying every generate call. Mock backends key
/// their deterministic behavior off these fields; transports may ignore them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallMeta {
    pub kind: CallKind,
    /// 1-based debate round, or for stage summaries the round they feed.
    pub round: usize,
    /// 1-based stage.
    pub stage: usize,
    /// Acting agent for responses; `None` for group summaries.
    pub agent: Option<usize>,
    /// Group the call belongs to, where applicable.
    pub group: Option<usize>,
    pub task: TaskKind,
    /// Run seed, so mock output is a pure function of (seed, agent, round).
    pub seed: u64,
    /// Ground-truth answer for the current problem, if known. Mock answer
    /// policies use it to emit correct or deliberately wrong answers.
    pub truth: Option<String>,
}

/// One backend completion: the text plus exact usage accounting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generation {
    pub text: String,
    /// Tokens counted over the full prompt context.
    pub prompt_tokens: u64,
    /// Tokens counted over the generated text.
    pub completion_tokens: u64,
    /// True when usage was estimated locally rather than reported by the
    /// transport.
    pub usage_estimated: bool,
}

/// Anything that can complete a context. Implementations must be safe to
/// share across threads: rounds fan out one call per agent in parallel.
pub trait AgentBackend: Send + Sync {
    fn generate(&self, context: &[Message], meta: &CallMeta) -> Result<Generation>;
}

/// Which backend implementation a config selects.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    #[default]
    Mock,
    Http,
}

/// Declarative backend selection, as it appears in experiment configs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub tokenizer: Tokenizer,
    pub mock: MockConfig,
    pub http: HttpConfig,
}

/// Mock behavior knobs. `policy` picks the family; the remaining fields
/// parameterize it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MockConfig {
    pub policy: MockPolicyKind,
    /// Exact length, in counted tokens, of every response output.
    pub output_tokens: u64,
    /// Exact length, in counted tokens, of every summary output.
    pub summary_tokens: u64,
    /// For `seeded_stochastic`: chance an agent's round-1 answer is correct.
    pub correct_probability: f64,
    /// For `seeded_stochastic`: per-round chance a wrong agent adopts the
    /// correct answer after seeing debate context.
    pub convergence: f64,
    /// For `scripted`: agents that always answer correctly; all others answer
    /// wrong. Overrides take precedence when both are given.
    pub correct_agents: Vec<usize>,
}

impl Default for MockConfig {
    fn default() -> Self {
        MockConfig {
            policy: MockPolicyKind::FixedLength,
            output_tokens: 5,
            summary_tokens: 6,
            correct_probability: 0.5,
            convergence: 0.35,
            correct_agents: Vec::new(),
        }
    }
}

/// Mock policy families selectable from config files.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MockPolicyKind {
    /// Sentinel-tagged outputs padded to exact token lengths.
    #[default]
    FixedLength,
    /// Per-agent right/wrong answers from `correct_agents`.
    Scripted,
    /// Seeded random correctness with convergence toward truth.
    SeededStochastic,
}

/// Connection settings for the HTTP chat-completions backend. The API key is
/// read from the environment variable named by `api_key_env`; it is never
/// stored in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HttpConfig {
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub api_key_env: String,
    pub timeout_secs: u64,
    pub max_retries: u32,
    pub backoff_ms: u64,
    pub max_in_flight: usize,
}

impl Default for HttpConfig {
    fn default() -> Self {
        HttpConfig {
            endpoint: "https://api.openai.com/v1/chat/completions".to_string(),
            model: "gpt-3.5-turbo".to_string(),
            temperature: 1.0,
            max_tokens: 512,
            api_key_env: "OPENAI_API_KEY".to_string(),
            timeout_secs: 60,
            max_retries: 3,
            backoff_ms: 250,
            max_in_flight: 4,
        }
    }
}

impl BackendConfig {
    /// Instantiate the backend this config describes.
    pub fn build(&self) -> Result<Box<dyn AgentBackend>> {
        match self.kind {
            BackendKind::Mock => Ok(Box::new(MockBackend::from_config(self)?)),
            BackendKind::Http => Ok(Box::new(HttpBackend::new(self.http.clone(), self.tokenizer)?)),
        }
    }
}
