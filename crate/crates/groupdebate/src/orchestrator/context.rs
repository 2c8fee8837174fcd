//! Context assembly: turning memory state into the message list for a call.
//!
//! Two retention regimes exist. *Slot* contexts rebuild the message list
//! from the fixed three-slot memory every round — question, own latest
//! output, incoming buffer — so old material genuinely disappears. *History*
//! contexts replay the agent's entire chat so far. Blocks of multiple texts
//! are always joined with a blank line, which adds no whitespace-delimited
//! tokens, keeping measured prompt sizes exactly additive.

use crate::backends::{Message, Role};
use crate::core::{GroupSummary, PeerOutput, TaskKind};
use crate::error::Result;
use crate::tasks::{Problem, PromptSet};

/// Join several texts into one block without adding counted tokens.
pub(crate) fn join_block<S: AsRef<str>>(texts: &[S]) -> String {
    texts
        .iter()
        .map(|t| t.as_ref())
        .collect::<Vec<_>>()
        .join("\n\n")
}

pub(crate) struct ContextBuilder<'a> {
    prompts: &'a PromptSet,
    task: TaskKind,
    /// The rendered starting prompt; this is the "question" agents carry.
    starting: String,
}

impl<'a> ContextBuilder<'a> {
    pub fn new(prompts: &'a PromptSet, problem: &Problem) -> Result<Self> {
        Ok(ContextBuilder {
            prompts,
            task: problem.task,
            starting: prompts.starting_prompt(problem)?,
        })
    }

    pub fn starting(&self) -> &str {
        &self.starting
    }

    fn system(&self) -> Option<Message> {
        self.prompts
            .system_message()
            .map(|s| Message::new(Role::System, s))
    }

    /// Round 1: the question alone.
    pub fn initial(&self) -> Vec<Message> {
        let mut ctx = Vec::new();
        if let Some(sys) = self.system() {
            ctx.push(sys);
        }
        ctx.push(Message::new(Role::User, self.starting.clone()));
        ctx
    }

    /// Slot-retention response context: question, own latest output, and the
    /// new user turn.
    pub fn slots(&self, own_output: &str, user_text: String) -> Vec<Message> {
        let mut ctx = self.initial();
        ctx.push(Message::new(Role::Assistant, own_output));
        ctx.push(Message::new(Role::User, user_text));
        ctx
    }

    /// History-retention response context: the full chat so far plus the new
    /// user turn. `history` starts at the question and excludes the system
    /// message, which is re-attached per call.
    pub fn history(&self, history: &[Message], user_text: Option<Message>) -> Vec<Message> {
        let mut ctx = Vec::with_capacity(history.len() + 2);
        if let Some(sys) = self.system() {
            ctx.push(sys);
        }
        ctx.extend_from_slice(history);
        if let Some(user) = user_text {
            ctx.push(user);
        }
        ctx
    }

    /// Summarization context: the outputs block alone, never the question
    /// and never the system persona.
    pub fn summary(&self, outputs_block: &str) -> Result<Vec<Message>> {
        Ok(vec![Message::new(
            Role::User,
            self.prompts.summary_prompt(outputs_block)?,
        )])
    }

    /// The user turn carrying peer outputs, ordered by agent index.
    pub fn intra_user(&self, peers: &[PeerOutput]) -> Result<String> {
        let block = join_block(&peers.iter().map(|p| p.text.as_str()).collect::<Vec<_>>());
        self.intra_block_user(&block)
    }

    /// The user turn carrying an already-assembled block — peer outputs or a
    /// summary standing in for them.
    pub fn intra_block_user(&self, block: &str) -> Result<String> {
        self.prompts.intra_prompt(self.task, block)
    }

    /// The user turn carrying the summary pool. `pool` must be ordered with
    /// the agent's own group's summary first.
    pub fn inter_user(&self, pool: &[GroupSummary]) -> Result<String> {
        let own = pool.first().map(|s| s.text.as_str()).unwrap_or("");
        let others = join_block(&pool[1.min(pool.len())..]
            .iter()
            .map(|s| s.text.as_str())
            .collect::<Vec<_>>());
        self.prompts.inter_prompt(self.task, own, &others)
    }

    /// The user turn asking the agent to re-examine its own answer.
    pub fn reflect_user(&self) -> Result<String> {
        self.prompts.reflect_prompt(self.task)
    }
}
