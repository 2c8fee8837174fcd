//! Answer extraction, normalization, and majority voting.
//!
//! Extraction is task-specific and always takes the *last* occurrence of the
//! task's answer marker, because agents are instructed to finish their
//! response with the answer. A response with no extractable answer maps to
//! the [`UNPARSEABLE`] sentinel, which participates in voting as an ordinary
//! (losing, unless the whole field is garbage) value.

use once_cell::sync::Lazy;
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::config::TaskKind;
use crate::error::{Error, Result};

/// Normalized value recorded when a response contains no extractable answer.
pub const UNPARSEABLE: &str = "[unparseable]";

/// A response reduced to a comparable answer value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalAnswer {
    /// The response text the answer was extracted from.
    pub raw: String,
    /// The normalized value used for voting and scoring.
    pub value: String,
}

impl CanonicalAnswer {
    pub fn is_unparseable(&self) -> bool {
        self.value == UNPARSEABLE
    }
}

static NUMERIC: Lazy<Regex> = Lazy::new(|| Regex::new(r"[-+]?\d+(?:\.\d+)?").unwrap());
static MMLU_CHOICE: Lazy<Regex> = Lazy::new(|| Regex::new(r"\(\s*([A-Da-d])\s*\)").unwrap());
static INT_FORM: Lazy<Regex> = Lazy::new(|| Regex::new(r"^[-+]?\d+$").unwrap());
static DEC_FORM: Lazy<Regex> = Lazy::new(|| Regex::new(r"^[-+]?\d+\.\d+$").unwrap());

/// Bring a raw answer value to canonical form. Idempotent:
/// `normalize(task, normalize(task, x)) == normalize(task, x)`.
///
/// Numbers lose sign noise and redundant zeros ("072" → "72", "+3" → "3",
/// "23.50" → "23.5", "-0" → "0"); choice letters are uppercased; anything
/// else (symbolic math answers) has its whitespace collapsed.
pub fn normalize(task: TaskKind, raw: &str) -> String {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return UNPARSEABLE.to_string();
    }
    if task == TaskKind::Mmlu {
        return trimmed.to_ascii_uppercase();
    }
    if INT_FORM.is_match(trimmed) {
        return normalize_integer(trimmed);
    }
    if DEC_FORM.is_match(trimmed) {
        return normalize_decimal(trimmed);
    }
    // Symbolic answer (MATH can produce e.g. "\frac{1}{2}"): collapse runs of
    // whitespace so formatting differences do not split the vote.
    trimmed.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn normalize_integer(s: &str) -> String {
    let (neg, digits) = split_sign(s);
    let digits = digits.trim_start_matches('0');
    if digits.is_empty() {
        return "0".to_string();
    }
    if neg {
        format!("-{digits}")
    } else {
        digits.to_string()
    }
}

fn normalize_decimal(s: &str) -> String {
    let (neg, body) = split_sign(s);
    let (int_part, frac_part) = body.split_once('.').expect("decimal form has a dot");
    let int_part = {
        let t = int_part.trim_start_matches('0');
        if t.is_empty() {
            "0"
        } else {
            t
        }
    };
    let frac_part = frac_part.trim_end_matches('0');
    let magnitude = if frac_part.is_empty() {
        int_part.to_string()
    } else {
        format!("{int_part}.{frac_part}")
    };
    if neg && magnitude != "0" {
        format!("-{magnitude}")
    } else {
        magnitude
    }
}

fn split_sign(s: &str) -> (bool, &str) {
    match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    }
}

/// Extract the task-appropriate answer from a response.
///
/// - Arithmetic: the last numeric literal.
/// - GSM8K / MATH: the content of the last `\boxed{...}` (brace-balanced).
/// - MMLU: the last parenthesized choice letter A–D.
pub fn extract_answer(task: TaskKind, response: &str) -> CanonicalAnswer {
    let value = match task {
        TaskKind::Arithmetic => NUMERIC
            .find_iter(response)
            .last()
            .map(|m| m.as_str().to_string()),
        TaskKind::Gsm8k | TaskKind::Math => last_boxed(response),
        TaskKind::Mmlu => MMLU_CHOICE
            .captures_iter(response)
            .last()
            .map(|c| c[1].to_string()),
    };
    let value = match value {
        Some(v) => normalize(task, &v),
        None => UNPARSEABLE.to_string(),
    };
    CanonicalAnswer {
        raw: response.to_string(),
        value,
    }
}

/// Content of the last `\boxed{...}`, walking braces so nested groups like
/// `\boxed{\frac{1}{2}}` survive. An unclosed box is unparseable.
fn last_boxed(text: &str) -> Option<String> {
    const MARKER: &str = "\\boxed{";
    let start = text.rfind(MARKER)?;
    let body = &text[start + MARKER.len()..];
    let mut depth = 1usize;
    for (i, c) in body.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(body[..i].to_string());
                }
            }
            _ => {}
        }
    }
    None
}

/// Majority vote over normalized values. Ties break to the lexicographically
/// smallest value so the result never depends on input order; an empty slate
/// is an error.
pub fn majority_vote(answers: &[CanonicalAnswer]) -> Result<CanonicalAnswer> {
    if answers.is_empty() {
        return Err(Error::EmptyVote);
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for a in answers {
        *counts.entry(a.value.as_str()).or_default() += 1;
    }
    let top = *counts.values().max().expect("non-empty");
    // BTreeMap iterates keys in ascending order, so the first key holding the
    // winning count is the lexicographically smallest — the tie-break rule.
    let winner = counts
        .iter()
        .find(|(_, &n)| n == top)
        .map(|(v, _)| v.to_string())
        .expect("non-empty");
    Ok(CanonicalAnswer {
        raw: winner.clone(),
        value: winner,
    })
}
