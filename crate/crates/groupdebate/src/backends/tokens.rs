//! Token counting.
//!
//! Two counters are provided. `AdditiveWords` counts whitespace-delimited
//! units, which makes counting *additive*: the count of two texts joined by
//! whitespace equals the sum of their counts. That property is what lets a
//! measured token ledger match the analytical cost model exactly — contexts
//! are assembled by joining pieces, and no join can create or destroy a
//! counted unit. `CharEstimate` is the usual chars/4 heuristic for live
//! transports that fail to report usage.

use serde::{Deserialize, Serialize};

use super::Message;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tokenizer {
    /// Whitespace-delimited unit count; exactly additive under joins.
    #[default]
    AdditiveWords,
    /// ceil(chars / 4) over Unicode scalar values — a rough estimate for
    /// transports that omit usage data.
    CharEstimate,
}

impl Tokenizer {
    pub fn count(&self, text: &str) -> u64 {
        match self {
            Tokenizer::AdditiveWords => text.split_whitespace().count() as u64,
            Tokenizer::CharEstimate => (text.chars().count() as u64).div_ceil(4),
        }
    }

    /// Count of a serialized context: the sum over message contents. For the
    /// additive counter this equals counting the whitespace-joined
    /// concatenation of all contents.
    pub fn count_messages(&self, messages: &[Message]) -> u64 {
        messages.iter().map(|m| self.count(&m.content)).sum()
    }
}
