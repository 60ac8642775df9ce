//! Vocabulary and (partially masked) token sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Token id; valid ids are `0..V-1`. The mask is represented out of band
/// (as `None` in [`MaskedSeq`]), never as an in-range id.
pub type TokenId = u32;

/// A vocabulary of size `V >= 2` over token ids `0..V-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocab {
    size: u32,
}

impl Vocab {
    pub fn new(size: u32) -> Result<Self> {
        if size < 2 {
            return Err(Error::config(format!("vocab size must be >= 2, got {size}")));
        }
        Ok(Vocab { size })
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn contains(&self, token: TokenId) -> bool {
        token < self.size
    }
}

/// A fixed-length body of tokens being generated, plus an optional prompt
/// prefix. `None` entries are mask placeholders yet to be sampled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedSeq {
    prompt: Vec<TokenId>,
    body: Vec<Option<TokenId>>,
}

impl MaskedSeq {
    pub fn new(prompt: Vec<TokenId>, body: Vec<Option<TokenId>>, vocab: &Vocab) -> Result<Self> {
        if body.is_empty() {
            return Err(Error::config("sequence body must have length >= 1"));
        }
        for &t in &prompt {
            if !vocab.contains(t) {
                return Err(Error::domain(format!("prompt token {t} outside vocab")));
            }
        }
        for t in body.iter().flatten() {
            if !vocab.contains(*t) {
                return Err(Error::domain(format!("body token {t} outside vocab")));
            }
        }
        Ok(MaskedSeq { prompt, body })
    }

    /// All-masked body of length `len`.
    pub fn masked(prompt: Vec<TokenId>, len: usize, vocab: &Vocab) -> Result<Self> {
        MaskedSeq::new(prompt, vec![None; len], vocab)
    }

    /// Fully specified sequence (no masks), as produced by generation or
    /// read back for detection.
    pub fn from_tokens(prompt: Vec<TokenId>, tokens: Vec<TokenId>, vocab: &Vocab) -> Result<Self> {
        MaskedSeq::new(prompt, tokens.into_iter().map(Some).collect(), vocab)
    }

    pub fn prompt(&self) -> &[TokenId] {
        &self.prompt
    }

    pub fn body(&self) -> &[Option<TokenId>] {
        &self.body
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    pub fn num_masked(&self) -> usize {
        self.body.iter().filter(|t| t.is_none()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.num_masked() == 0
    }

    pub fn get(&self, pos: usize) -> Option<TokenId> {
        self.body[pos]
    }

    pub fn set(&mut self, pos: usize, token: TokenId) {
        debug_assert!(self.body[pos].is_none(), "position {pos} already committed");
        self.body[pos] = Some(token);
    }

    /// Committed body tokens; errors if any mask remains.
    pub fn tokens(&self) -> Result<Vec<TokenId>> {
        self.body
            .iter()
            .map(|t| t.ok_or_else(|| Error::internal("sequence still contains masks")))
            .collect()
    }

    /// Resolve an absolute position (prompt indices first, then body) to a
    /// committed token, if any. `offset_from` addresses body position `t`
    /// plus a signed offset, e.g. `offset_from(t, -1)` is the left neighbor
    /// which may fall into the prompt.
    pub fn resolve(&self, body_pos: usize, offset: i64) -> ContextToken {
        let abs = self.prompt.len() as i64 + body_pos as i64 + offset;
        if abs < 0 || abs >= (self.prompt.len() + self.body.len()) as i64 {
            return ContextToken::OutOfRange;
        }
        let abs = abs as usize;
        if abs < self.prompt.len() {
            ContextToken::Prompt(self.prompt[abs])
        } else {
            match self.body[abs - self.prompt.len()] {
                Some(t) => ContextToken::Body(t),
                None => ContextToken::Masked(abs - self.prompt.len()),
            }
        }
    }
}

/// Resolution of a context offset relative to a body position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextToken {
    /// Position falls in the prompt: always committed.
    Prompt(TokenId),
    /// Body position with a committed token.
    Body(TokenId),
    /// Body position still masked (payload: body index).
    Masked(usize),
    /// Before the prompt or past the end of the body.
    OutOfRange,
}

impl ContextToken {
    pub fn committed(&self) -> Option<TokenId> {
        match self {
            ContextToken::Prompt(t) | ContextToken::Body(t) => Some(*t),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_vocab() {
        assert!(Vocab::new(1).is_err());
        assert!(Vocab::new(2).is_ok());
    }

    #[test]
    fn rejects_out_of_vocab_tokens() {
        let v = Vocab::new(4).unwrap();
        assert!(MaskedSeq::from_tokens(vec![], vec![0, 3], &v).is_ok());
        assert!(MaskedSeq::from_tokens(vec![], vec![4], &v).is_err());
        assert!(MaskedSeq::new(vec![9], vec![Some(0)], &v).is_err());
    }

    #[test]
    fn resolve_walks_prompt_and_body() {
        let v = Vocab::new(10).unwrap();
        let s = MaskedSeq::new(vec![7, 8], vec![Some(1), None, Some(3)], &v).unwrap();
        assert_eq!(s.resolve(0, -1), ContextToken::Prompt(8));
        assert_eq!(s.resolve(0, -2), ContextToken::Prompt(7));
        assert_eq!(s.resolve(0, -3), ContextToken::OutOfRange);
        assert_eq!(s.resolve(0, 1), ContextToken::Masked(1));
        assert_eq!(s.resolve(1, 1), ContextToken::Body(3));
        assert_eq!(s.resolve(2, 1), ContextToken::OutOfRange);
    }
}
