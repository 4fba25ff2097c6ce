//! (k,l)-threshold sequences: strictly increasing `s_1 < ... < s_n` with
//! `k*i + d <= s_i <= k*n + l + d`.

use serde::{Deserialize, Serialize};

use crate::error::SequenceError;
use crate::exactmath::{raney, ExactInt};

/// Parameters of a family of threshold sequences.
///
/// `l` ranges over `0..=k-2`; the case `l = k-1` is rejected. `n = 0` is
/// accepted so counts can use the empty-sequence convention, but nothing
/// is ever enumerated for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub k: u32,
    pub l: u32,
    pub n: usize,
    #[serde(default)]
    pub d: i64,
}

impl ThresholdParams {
    pub fn new(k: u32, l: u32, n: usize) -> Result<Self, SequenceError> {
        Self::with_offset(k, l, n, 0)
    }

    pub fn with_offset(k: u32, l: u32, n: usize, d: i64) -> Result<Self, SequenceError> {
        let params = Self { k, l, n, d };
        params.check()?;
        Ok(params)
    }

    fn check(&self) -> Result<(), SequenceError> {
        if self.k < 2 {
            return Err(SequenceError::InvalidParams(format!("k must be >= 2, got {}", self.k)));
        }
        if self.l > self.k - 2 {
            return Err(SequenceError::InvalidParams(format!(
                "l must lie in [0, k-2] = [0, {}], got {}",
                self.k - 2,
                self.l
            )));
        }
        let top = i64::try_from(self.n)
            .ok()
            .and_then(|n| n.checked_mul(i64::from(self.k)))
            .and_then(|kn| kn.checked_add(i64::from(self.l)))
            .and_then(|v| v.checked_add(self.d));
        let bottom = i64::from(self.k).checked_add(self.d);
        if top.is_none() || bottom.is_none() {
            return Err(SequenceError::InvalidParams(format!(
                "bounds overflow for k={} l={} n={} d={}",
                self.k, self.l, self.n, self.d
            )));
        }
        Ok(())
    }

    /// Lowest admissible value at 1-based position `i`.
    pub fn lower(&self, i: usize) -> i64 {
        i64::from(self.k) * i as i64 + self.d
    }

    /// Common upper bound `kn + l + d`.
    pub fn upper(&self) -> i64 {
        i64::from(self.k) * self.n as i64 + i64::from(self.l) + self.d
    }
}

/// A validated threshold sequence. Construct through [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SequenceJson", into = "SequenceJson")]
pub struct ThresholdSequence {
    params: ThresholdParams,
    values: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct SequenceJson {
    k: u32,
    l: u32,
    n: usize,
    #[serde(default)]
    d: i64,
    values: Vec<i64>,
}

impl TryFrom<SequenceJson> for ThresholdSequence {
    type Error = SequenceError;

    fn try_from(json: SequenceJson) -> Result<Self, Self::Error> {
        let params = ThresholdParams::with_offset(json.k, json.l, json.n, json.d)?;
        validate(json.values, params)
    }
}

impl From<ThresholdSequence> for SequenceJson {
    fn from(seq: ThresholdSequence) -> Self {
        let ThresholdParams { k, l, n, d } = seq.params;
        SequenceJson { k, l, n, d, values: seq.values }
    }
}

impl ThresholdSequence {
    pub fn params(&self) -> ThresholdParams {
        self.params
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> i64 {
        *self.values.last().expect("threshold sequences have n >= 1")
    }

    pub fn is_proper(&self) -> bool {
        is_proper(self)
    }

    /// Reinterprets the same values under a larger or smaller `l`.
    pub fn with_l(&self, l: u32) -> Result<Self, SequenceError> {
        let p = self.params;
        validate(self.values.clone(), ThresholdParams::with_offset(p.k, l, p.n, p.d)?)
    }

    fn require_unshifted(&self) -> Result<(), SequenceError> {
        match self.params.d {
            0 => Ok(()),
            d => Err(SequenceError::NonZeroOffset(d)),
        }
    }
}

/// Checks every defining inequality and returns the typed sequence.
pub fn validate(values: Vec<i64>, params: ThresholdParams) -> Result<ThresholdSequence, SequenceError> {
    params.check()?;
    if params.n == 0 {
        return Err(SequenceError::InvalidParams("sequences have length n >= 1".into()));
    }
    if values.len() != params.n {
        return Err(SequenceError::LengthMismatch { expected: params.n, got: values.len() });
    }
    let high = params.upper();
    for (idx, &value) in values.iter().enumerate() {
        let i = idx + 1;
        let low = params.lower(i);
        if value < low || value > high {
            return Err(SequenceError::BoundViolation { index: i, value, low, high });
        }
        if idx > 0 && value <= values[idx - 1] {
            return Err(SequenceError::NotIncreasing { index: i });
        }
    }
    Ok(ThresholdSequence { params, values })
}

/// Proper sequences end exactly at the upper bound `kn + l + d`.
pub fn is_proper(seq: &ThresholdSequence) -> bool {
    seq.last() == seq.params.upper()
}

/// Largest `i < len` with `s_i < s_len - (len - i) k`, or 0. Works on any
/// prefix of an unshifted sequence.
pub(crate) fn cut_index_of(values: &[i64], k: u32) -> usize {
    let n = values.len();
    let Some(&last) = values.last() else { return 0 };
    let k = i64::from(k);
    (1..n)
        .rev()
        .find(|&i| values[i - 1] < last - (n - i) as i64 * k)
        .unwrap_or(0)
}

/// Cut index of an offset-0 sequence.
pub fn cut_index(seq: &ThresholdSequence) -> Result<usize, SequenceError> {
    seq.require_unshifted()?;
    Ok(cut_index_of(&seq.values, seq.params.k))
}

/// Translates every value and the offset by `d`.
pub fn shift(seq: &ThresholdSequence, d: i64) -> Result<ThresholdSequence, SequenceError> {
    let p = seq.params;
    let offset = p
        .d
        .checked_add(d)
        .ok_or_else(|| SequenceError::InvalidParams("offset overflow".into()))?;
    let params = ThresholdParams::with_offset(p.k, p.l, p.n, offset)?;
    let values = seq
        .values
        .iter()
        .map(|v| v.checked_add(d))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| SequenceError::InvalidParams("value overflow".into()))?;
    Ok(ThresholdSequence { params, values })
}

/// Number of (k,l)-threshold sequences of length n: `R_n^{(k,l+1)}`. 1 for n = 0.
pub fn count(params: ThresholdParams) -> ExactInt {
    raney(params.k, params.l + 1, params.n as u64).expect("parameters validated")
}

/// Number of proper sequences.
///
/// For `l >= 1` this is `R_{n-1}^{(k,k+l)}`; every (k,0)-sequence is proper,
/// so `l = 0` gives `R_n^{(k,1)}`. 1 for n = 0.
pub fn count_proper(params: ThresholdParams) -> ExactInt {
    let ThresholdParams { k, l, n, .. } = params;
    if n == 0 {
        return ExactInt::from(1);
    }
    let value = if l == 0 { raney(k, 1, n as u64) } else { raney(k, k + l, n as u64 - 1) };
    value.expect("parameters validated")
}

/// Lexicographic stream of every sequence with the given parameters.
pub fn enumerate(params: ThresholdParams) -> Result<Sequences, SequenceError> {
    params.check()?;
    if params.n == 0 {
        return Err(SequenceError::InvalidParams("enumeration requires n >= 1".into()));
    }
    Ok(Sequences { params, current: None, finished: false })
}

/// Iterator returned by [`enumerate`].
///
/// Position `i` ranges over `[max(s_{i-1} + 1, k i + d), kn + l + d - (n - i)]`;
/// every value in that window extends to a full sequence, so stepping the
/// rightmost movable position and resetting the suffix to its minimum walks
/// the sequences in lexicographic order.
#[derive(Clone, Debug)]
pub struct Sequences {
    params: ThresholdParams,
    current: Option<Vec<i64>>,
    finished: bool,
}

impl Sequences {
    fn ceiling(&self, i: usize) -> i64 {
        self.params.upper() - (self.params.n - i) as i64
    }

    fn fill_from(&self, values: &mut [i64], start: usize) {
        for idx in start..values.len() {
            let floor = self.params.lower(idx + 1);
            values[idx] = if idx == 0 { floor } else { floor.max(values[idx - 1] + 1) };
        }
    }
}

impl Iterator for Sequences {
    type Item = ThresholdSequence;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        match self.current.take() {
            None => {
                let mut values = vec![0; self.params.n];
                self.fill_from(&mut values, 0);
                self.current = Some(values);
            }
            Some(mut values) => {
                let movable = (0..values.len()).rev().find(|&idx| values[idx] < self.ceiling(idx + 1));
                match movable {
                    Some(idx) => {
                        values[idx] += 1;
                        self.fill_from(&mut values, idx + 1);
                        self.current = Some(values);
                    }
                    None => {
                        self.finished = true;
                        return None;
                    }
                }
            }
        }
        let values = self.current.clone().expect("just set");
        Some(ThresholdSequence { params: self.params, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::WithBudget;
    use proptest::prelude::*;

    fn params(k: u32, l: u32, n: usize) -> ThresholdParams {
        ThresholdParams::new(k, l, n).unwrap()
    }

    fn seq(values: &[i64], k: u32, l: u32) -> ThresholdSequence {
        validate(values.to_vec(), params(k, l, values.len())).unwrap()
    }

    // Product of all per-position ranges, filtered; shares nothing with `Sequences`.
    fn brute_force(k: u32, l: u32, n: usize) -> Vec<Vec<i64>> {
        let p = params(k, l, n);
        let mut out: Vec<Vec<i64>> = vec![vec![]];
        for i in 1..=n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (p.lower(i)..=p.upper()).map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v);
                        next
                    })
                })
                .filter(|s| s.windows(2).all(|w| w[0] < w[1]))
                .collect();
        }
        out
    }

    #[test]
    fn example_sequences_classify() {
        let s1 = seq(&[3, 6, 14, 15, 17, 18], 3, 0);
        assert!(s1.is_proper());
        let s1_wide = s1.with_l(1).unwrap();
        assert!(!s1_wide.is_proper());
        let s2 = seq(&[3, 6, 14, 15, 17, 19], 3, 1);
        assert!(s2.is_proper());
        let s3 = validate(vec![3, 4, 14, 15, 17, 18], params(3, 0, 6));
        assert_eq!(s3, Err(SequenceError::BoundViolation { index: 2, value: 4, low: 6, high: 18 }));
        assert!(validate(vec![3], params(3, 0, 1)).is_ok());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            validate(vec![3, 10, 10], params(3, 1, 3)),
            Err(SequenceError::NotIncreasing { index: 3 })
        );
        assert_eq!(
            validate(vec![3, 6], params(3, 0, 3)),
            Err(SequenceError::LengthMismatch { expected: 3, got: 2 })
        );
        assert!(ThresholdParams::new(3, 2, 4).is_err());
        assert!(ThresholdParams::new(1, 0, 4).is_err());
        assert!(ThresholdParams::with_offset(3, 0, 4, i64::MAX).is_err());
    }

    #[test]
    fn cut_index_examples() {
        assert_eq!(cut_index(&seq(&[7, 9, 17, 18], 4, 2)), Ok(2));
        assert_eq!(cut_index(&seq(&[7, 12, 14, 16], 4, 0)), Ok(0));
        let shifted = shift(&seq(&[7, 12, 14, 16], 4, 0), 1).unwrap();
        assert_eq!(cut_index(&shifted), Err(SequenceError::NonZeroOffset(1)));
    }

    #[test]
    fn cut_index_is_zero_for_l0() {
        for k in 2..=4 {
            for n in 1..=6 {
                for s in enumerate(params(k, 0, n)).unwrap() {
                    assert_eq!(cut_index(&s), Ok(0), "{:?}", s.values());
                }
            }
        }
    }

    #[test]
    fn enumerate_small_cases() {
        let one: Vec<_> = enumerate(params(3, 0, 1)).unwrap().map(|s| s.into_values()).collect();
        assert_eq!(one, vec![vec![3]]);
        assert_eq!(enumerate(params(3, 1, 2)).unwrap().count(), 7);
        assert_eq!(enumerate(params(2, 0, 4)).unwrap().count(), 14);
        assert!(enumerate(params(3, 0, 0)).is_err());
    }

    #[test]
    fn enumerate_matches_brute_force() {
        for k in 2..=4 {
            for l in 0..=k - 2 {
                for n in 1..=4 {
                    let got: Vec<_> = enumerate(params(k, l, n)).unwrap().map(|s| s.into_values()).collect();
                    assert_eq!(got, brute_force(k, l, n), "k={k} l={l} n={n}");
                }
            }
        }
    }

    #[test]
    fn counts_match_enumeration() {
        assert_eq!(count(params(3, 0, 2)), ExactInt::from(3));
        assert_eq!(count(params(3, 1, 1)), ExactInt::from(2));
        assert_eq!(count(params(3, 1, 0)), ExactInt::from(1));
        let p = params(4, 2, 4);
        assert_eq!(count(p), ExactInt::from(enumerate(p).unwrap().count()));
    }

    #[test]
    fn proper_counts() {
        assert_eq!(count_proper(params(3, 1, 1)), ExactInt::from(1));
        let filtered = enumerate(params(3, 1, 1)).unwrap().filter(is_proper).count();
        assert_eq!(filtered, 1);
        for k in 2..=5 {
            assert_eq!(count_proper(params(k, 0, 1)), ExactInt::from(1));
        }
        for n in 1..=10u64 {
            let p = params(3, 1, n as usize);
            let closed = crate::exactmath::exact_div(
                &(crate::exactmath::binomial(3 * n, n as i64 - 1) * 2),
                &ExactInt::from(n + 1),
            );
            assert_eq!(count_proper(p), closed);
            assert_eq!(count_proper(p), count(p) - count(params(3, 0, n as usize)));
        }
    }

    #[test]
    fn shift_round_trip_and_counts() {
        let s = seq(&[3, 6], 3, 0);
        let up = shift(&s, 3).unwrap();
        assert_eq!(up.values(), &[6, 9]);
        assert_eq!(up.params().d, 3);
        assert_eq!(shift(&up, -3).unwrap(), s);
        let shifted = ThresholdParams::with_offset(3, 0, 3, 5).unwrap();
        assert_eq!(enumerate(shifted).unwrap().count(), enumerate(params(3, 0, 3)).unwrap().count());
        for s in enumerate(shifted).unwrap() {
            assert_eq!(validate(s.values().to_vec(), shifted).as_ref(), Ok(&s));
        }
    }

    #[test]
    fn json_shape() {
        let s = seq(&[3, 6], 3, 0);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"k":3,"l":0,"n":2,"d":0,"values":[3,6]}"#);
        let back: ThresholdSequence = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<ThresholdSequence>(r#"{"k":3,"l":0,"n":2,"values":[3,4]}"#).is_err());
    }

    #[test]
    fn budget_cap() {
        assert!(enumerate(params(3, 1, 3)).unwrap().count_within(29).is_err());
        assert_eq!(enumerate(params(3, 1, 3)).unwrap().count_within(30), Ok(30));
    }

    proptest! {
        #[test]
        fn enumeration_is_lexicographic_and_valid(k in 2u32..=5, l_raw in 0u32..4, n in 1usize..=5) {
            let l = l_raw % (k - 1);
            let p = params(k, l, n);
            let all: Vec<_> = enumerate(p).unwrap().collect();
            for w in all.windows(2) {
                prop_assert!(w[0].values() < w[1].values());
            }
            for s in &all {
                prop_assert!(validate(s.values().to_vec(), p).is_ok());
            }
            let proper = all.iter().filter(|s| s.is_proper()).count();
            prop_assert_eq!(ExactInt::from(proper), count_proper(p));
            if l >= 1 {
                let narrower = params(k, l - 1, n);
                prop_assert_eq!(count(p) - count(narrower), count_proper(p));
                for s in enumerate(narrower).unwrap() {
                    prop_assert!(s.with_l(l).is_ok());
                }
            }
        }
    }
}
