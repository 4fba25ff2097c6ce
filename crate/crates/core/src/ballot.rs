//! Ballot-word encoding of threshold sequences over the alphabet `{A, B}`.
//!
//! `W(S) = A W_1 ... W_n` where `W_i` is `s_i - s_{i-1}` letters `A` followed
//! by one `B` (`s_0 = 0`).

use std::fmt;

use crate::error::{BallotError, SequenceError};
use crate::threshold::{validate, ThresholdParams, ThresholdSequence};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallotWord {
    pub k: u32,
    pub letters: String,
}

impl BallotWord {
    pub fn new(k: u32, letters: impl Into<String>) -> Self {
        Self { k, letters: letters.into() }
    }

    pub fn count_a(&self) -> usize {
        self.letters.bytes().filter(|&c| c == b'A').count()
    }

    pub fn count_b(&self) -> usize {
        self.letters.bytes().filter(|&c| c == b'B').count()
    }

    pub fn as_str(&self) -> &str {
        &self.letters
    }
}

impl fmt::Display for BallotWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letters)
    }
}

pub fn to_ballot(seq: &ThresholdSequence) -> Result<BallotWord, SequenceError> {
    let params = seq.params();
    if params.d != 0 {
        return Err(SequenceError::NonZeroOffset(params.d));
    }
    let mut letters = String::with_capacity(seq.last() as usize + 1 + seq.len());
    letters.push('A');
    let mut previous = 0;
    for &value in seq.values() {
        letters.extend(std::iter::repeat_n('A', (value - previous) as usize));
        letters.push('B');
        previous = value;
    }
    Ok(BallotWord { k: params.k, letters })
}

/// Decodes `A (A^{m_1} B) ... (A^{m_n} B)` with every `m_i >= 1` and checks
/// the result against `(k, l)`.
pub fn from_ballot(word: &BallotWord, k: u32, l: u32) -> Result<ThresholdSequence, BallotError> {
    let text = word.letters.as_bytes();
    if let Some(pos) = text.iter().position(|&c| c != b'A' && c != b'B') {
        return Err(BallotError::Malformed(format!("letter {:?} at position {pos}", text[pos] as char)));
    }
    if text.first() != Some(&b'A') {
        return Err(BallotError::Malformed("word must start with A".into()));
    }
    if text.last() != Some(&b'B') {
        return Err(BallotError::Malformed("word must end with B".into()));
    }
    let mut values = Vec::new();
    let mut total = 0i64;
    // Skip the leading A that precedes the first block.
    for (idx, block) in text[1..text.len() - 1].split(|&c| c == b'B').enumerate() {
        if block.is_empty() {
            return Err(BallotError::Malformed(format!("block {} has no A before its B", idx + 1)));
        }
        total += block.len() as i64;
        values.push(total);
    }
    let params = ThresholdParams::new(k, l, values.len())?;
    Ok(validate(values, params)?)
}

/// True iff the word is over `{A, B}`, has no two adjacent `B`s, ends in
/// `B`, and after every `B` the prefix has `#A >= k #B + 1`.
pub fn is_k_ballot_isolated(word: &BallotWord, k: u32) -> bool {
    let text = word.letters.as_bytes();
    if text.last() != Some(&b'B') {
        return false;
    }
    let (mut a, mut b) = (0usize, 0usize);
    let mut previous = 0u8;
    for &c in text {
        match c {
            b'A' => a += 1,
            b'B' => {
                if previous == b'B' {
                    return false;
                }
                b += 1;
                if a < k as usize * b + 1 {
                    return false;
                }
            }
            _ => return false,
        }
        previous = c;
    }
    true
}
