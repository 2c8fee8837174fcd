//! HTTP chat-completions backend.
//!
//! Speaks the widely-implemented `POST /v1/chat/completions` wire format:
//! request `{model, messages, temperature, max_tokens}`, response
//! `choices[0].message.content` plus a `usage` block. Works against any
//! compatible endpoint.
//!
//! Reliability: transient failures (HTTP 429, 5xx, connect/timeout errors)
//! are retried up to `max_retries` times with exponential backoff; other
//! client errors fail immediately. Concurrency is bounded by a counting
//! semaphore so a parallel round never opens more than `max_in_flight`
//! connections. When a response omits usage numbers, counts are estimated
//! locally and the generation is flagged as estimated.
//!
//! The API key is read from the environment variable named in the config
//! (`api_key_env`); keys never live in config files.

use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{AgentBackend, CallMeta, Generation, HttpConfig, Message, Role, Tokenizer};

#[derive(Serialize)]
struct WireRequest<'a> {
    model: &'a str,
    messages: Vec<WireMessage<'a>>,
    temperature: f64,
    max_tokens: u32,
}

#[derive(Serialize)]
struct WireMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: Option<WireUsage>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireChoiceMessage,
}

#[derive(Deserialize)]
struct WireChoiceMessage {
    content: String,
}

#[derive(Deserialize)]
struct WireUsage {
    prompt_tokens: u64,
    completion_tokens: u64,
}

/// Counting semaphore on std primitives; caps concurrent requests.
struct Gate {
    slots: Mutex<usize>,
    freed: Condvar,
}

impl Gate {
    fn new(slots: usize) -> Self {
        Gate { slots: Mutex::new(slots.max(1)), freed: Condvar::new() }
    }

    fn acquire(&self) -> GateGuard<'_> {
        let mut slots = self.slots.lock().unwrap();
        while *slots == 0 {
            slots = self.freed.wait(slots).unwrap();
        }
        *slots -= 1;
        GateGuard { gate: self }
    }
}

struct GateGuard<'a> {
    gate: &'a Gate,
}

impl Drop for GateGuard<'_> {
    fn drop(&mut self) {
        *self.gate.slots.lock().unwrap() += 1;
        self.gate.freed.notify_one();
    }
}

/// Blocking HTTP backend for live runs.
pub struct HttpBackend {
    config: HttpConfig,
    api_key: String,
    client: reqwest::blocking::Client,
    tokenizer: Tokenizer,
    gate: Gate,
}

impl HttpBackend {
    pub fn new(config: HttpConfig, tokenizer: Tokenizer) -> Result<Self> {
        let api_key = std::env::var(&config.api_key_env).map_err(|_| {
            Error::config(format!(
                "environment variable {} is not set; it must hold the API key",
                config.api_key_env
            ))
        })?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| Error::Backend(format!("building HTTP client: {e}")))?;
        let gate = Gate::new(config.max_in_flight);
        Ok(HttpBackend { config, api_key, client, tokenizer, gate })
    }

    fn attempt(&self, body: &WireRequest<'_>) -> std::result::Result<WireResponse, AttemptError> {
        let response = self
            .client
            .post(&self.config.endpoint)
            .bearer_auth(&self.api_key)
            .json(body)
            .send()
            .map_err(|e| {
                if e.is_timeout() || e.is_connect() {
                    AttemptError::Transient(format!("request failed: {e}"))
                } else {
                    AttemptError::Fatal(format!("request failed: {e}"))
                }
            })?;

        let status = response.status();
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(AttemptError::Transient(format!("endpoint returned {status}")));
        }
        if !status.is_success() {
            let detail = response.text().unwrap_or_default();
            return Err(AttemptError::Fatal(format!(
                "endpoint returned {status}: {}",
                detail.trim()
            )));
        }
        response
            .json::<WireResponse>()
            .map_err(|e| AttemptError::Fatal(format!("malformed response body: {e}")))
    }
}

enum AttemptError {
    /// Worth retrying: rate limits, server errors, connect/timeout failures.
    Transient(String),
    Fatal(String),
}

impl AgentBackend for HttpBackend {
    fn generate(&self, context: &[Message], meta: &CallMeta) -> Result<Generation> {
        let _slot = self.gate.acquire();
        let body = WireRequest {
            model: &self.config.model,
            messages: context
                .iter()
                .map(|m| WireMessage {
                    role: match m.role {
                        Role::System => "system",
                        Role::User => "user",
                        Role::Assistant => "assistant",
                    },
                    content: &m.content,
                })
                .collect(),
            temperature: self.config.temperature,
            max_tokens: self.config.max_tokens,
        };

        let mut last_transient = String::new();
        for attempt in 0..=self.config.max_retries {
            if attempt > 0 {
                let backoff = self.config.backoff_ms.saturating_mul(1 << (attempt - 1));
                std::thread::sleep(Duration::from_millis(backoff));
            }
            match self.attempt(&body) {
                Ok(parsed) => {
                    let text = parsed
                        .choices
                        .first()
                        .map(|c| c.message.content.clone())
                        .ok_or_else(|| {
                            Error::Backend("response contained no choices".to_string())
                        })?;
                    let (prompt_tokens, completion_tokens, usage_estimated) = match parsed.usage {
                        Some(u) => (u.prompt_tokens, u.completion_tokens, false),
                        None => (
                            self.tokenizer.count_messages(context),
                            self.tokenizer.count(&text),
                            true,
                        ),
                    };
                    return Ok(Generation { text, prompt_tokens, completion_tokens, usage_estimated });
                }
                Err(AttemptError::Fatal(message)) => {
                    return Err(Error::Backend(describe_call(meta, &message)));
                }
                Err(AttemptError::Transient(message)) => last_transient = message,
            }
        }
        Err(Error::Backend(describe_call(
            meta,
            &format!(
                "gave up after {} attempts; last error: {last_transient}",
                self.config.max_retries + 1
            ),
        )))
    }
}

fn describe_call(meta: &CallMeta, message: &str) -> String {
    match meta.agent {
        Some(a) => format!("round {} agent {a}: {message}", meta.round),
        None => format!("round {} group summary: {message}", meta.round),
    }
}
