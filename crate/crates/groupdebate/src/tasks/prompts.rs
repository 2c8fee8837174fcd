//! Prompt templates and rendering.
//!
//! Templates use `{name}` slots; `{{` and `}}` escape to literal braces.
//! Slot values are inserted verbatim and never re-scanned, so model outputs
//! containing braces can flow back into later prompts safely.
//!
//! Two built-in template sets exist. `PromptSet::debate()` carries the full
//! natural-language debate prompts loaded from `templates/debate_prompts.toml`
//! (embedded at compile time). `PromptSet::bare()` renders each slot's raw
//! content and nothing else — no framing text, no system message — which
//! makes a run's measured token ledger line up with the analytical cost
//! model exactly.

use once_cell::sync::Lazy;
use serde::Deserialize;

use crate::core::{PromptStyle, TaskKind};
use crate::error::{Error, Result};

use super::Problem;

/// Per-task template texts.
#[derive(Debug, Clone, Deserialize)]
pub struct TaskTexts {
    pub arithmetic: String,
    pub gsm8k: String,
    pub mmlu: String,
    pub math: String,
}

impl TaskTexts {
    fn uniform(text: &str) -> Self {
        TaskTexts {
            arithmetic: text.to_string(),
            gsm8k: text.to_string(),
            mmlu: text.to_string(),
            math: text.to_string(),
        }
    }

    pub fn get(&self, task: TaskKind) -> &str {
        match task {
            TaskKind::Arithmetic => &self.arithmetic,
            TaskKind::Gsm8k => &self.gsm8k,
            TaskKind::Mmlu => &self.mmlu,
            TaskKind::Math => &self.math,
        }
    }
}

#[derive(Deserialize)]
struct RawFile {
    system: RawSystem,
    starting: TaskTexts,
    debate: RawDebate,
    format: TaskTexts,
}

#[derive(Deserialize)]
struct RawSystem {
    debater: String,
}

#[derive(Deserialize)]
struct RawDebate {
    intra: String,
    inter: String,
    summary: String,
    reflect: String,
}

/// A complete set of templates for one prompt style.
#[derive(Debug, Clone)]
pub struct PromptSet {
    system: String,
    starting: TaskTexts,
    intra: String,
    inter: String,
    summary: String,
    reflect: String,
    format: TaskTexts,
}

static DEBATE: Lazy<PromptSet> = Lazy::new(|| {
    let raw: RawFile = toml::from_str(include_str!("../../templates/debate_prompts.toml"))
        .expect("embedded debate templates must parse");
    PromptSet {
        system: raw.system.debater,
        starting: raw.starting,
        intra: raw.debate.intra,
        inter: raw.debate.inter,
        summary: raw.debate.summary,
        reflect: raw.debate.reflect,
        format: raw.format,
    }
});

static BARE: Lazy<PromptSet> = Lazy::new(|| PromptSet {
    system: String::new(),
    starting: TaskTexts::uniform("{question}"),
    intra: "{peer_outputs}".to_string(),
    inter: "{own_summary}\n\n{other_summaries}".to_string(),
    summary: "{responses}".to_string(),
    reflect: String::new(),
    format: TaskTexts::uniform(""),
});

impl PromptSet {
    /// The natural-language debate templates.
    pub fn debate() -> &'static PromptSet {
        &DEBATE
    }

    /// Raw-slot templates: every rendered prompt is exactly its content.
    pub fn bare() -> &'static PromptSet {
        &BARE
    }

    pub fn for_style(style: PromptStyle) -> &'static PromptSet {
        match style {
            PromptStyle::Debate => PromptSet::debate(),
            PromptStyle::Bare => PromptSet::bare(),
        }
    }

    /// The system message for response calls, if this style uses one.
    pub fn system_message(&self) -> Option<&str> {
        if self.system.is_empty() {
            None
        } else {
            Some(self.system.as_str())
        }
    }

    fn format_text(&self, task: TaskKind) -> Result<String> {
        render(self.format.get(task), &[])
    }

    /// The opening prompt presenting the problem.
    pub fn starting_prompt(&self, problem: &Problem) -> Result<String> {
        let format = self.format_text(problem.task)?;
        let mut slots = vec![
            ("question", problem.question.as_str()),
            ("format", format.as_str()),
        ];
        if let Some(choices) = &problem.choices {
            slots.push(("choice_a", choices[0].as_str()));
            slots.push(("choice_b", choices[1].as_str()));
            slots.push(("choice_c", choices[2].as_str()));
            slots.push(("choice_d", choices[3].as_str()));
        }
        render(self.starting.get(problem.task), &slots)
    }

    /// Revision prompt carrying peer opinions (or their summary).
    pub fn intra_prompt(&self, task: TaskKind, peer_outputs: &str) -> Result<String> {
        let format = self.format_text(task)?;
        render(
            &self.intra,
            &[("peer_outputs", peer_outputs), ("format", &format)],
        )
    }

    /// Revision prompt carrying the pool of group summaries.
    pub fn inter_prompt(
        &self,
        task: TaskKind,
        own_summary: &str,
        other_summaries: &str,
    ) -> Result<String> {
        let format = self.format_text(task)?;
        render(
            &self.inter,
            &[
                ("own_summary", own_summary),
                ("other_summaries", other_summaries),
                ("format", &format),
            ],
        )
    }

    /// Summarization prompt over a block of responses. Never includes the
    /// question.
    pub fn summary_prompt(&self, responses: &str) -> Result<String> {
        render(&self.summary, &[("responses", responses)])
    }

    /// Self-review prompt for reflection runs.
    pub fn reflect_prompt(&self, task: TaskKind) -> Result<String> {
        let format = self.format_text(task)?;
        render(&self.reflect, &[("format", &format)])
    }
}

/// Fill `{name}` slots in `template` from `slots`. Doubled braces escape;
/// unknown slots error; values are not re-scanned.
pub fn render(template: &str, slots: &[(&str, &str)]) -> Result<String> {
    let mut out = String::with_capacity(template.len());
    let mut chars = template.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '{' => {
                if chars.peek() == Some(&'{') {
                    chars.next();
                    out.push('{');
                    continue;
                }
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some('}') => break,
                        Some(ch) if ch.is_ascii_alphanumeric() || ch == '_' => name.push(ch),
                        Some(ch) => {
                            return Err(Error::config(format!(
                                "template slot name contains unexpected character {ch:?}"
                            )))
                        }
                        None => {
                            return Err(Error::config(
                                "template ends inside a slot reference",
                            ))
                        }
                    }
                }
                if name.is_empty() {
                    return Err(Error::config("template contains an empty slot reference"));
                }
                match slots.iter().find(|(k, _)| *k == name) {
                    Some((_, value)) => out.push_str(value),
                    None => return Err(Error::MissingSlot { slot: name }),
                }
            }
            '}' => {
                if chars.peek() == Some(&'}') {
                    chars.next();
                    out.push('}');
                } else {
                    return Err(Error::config("unmatched '}' in template"));
                }
            }
            _ => out.push(c),
        }
    }
    Ok(out)
}
