//! Extended Motzkin paths: up steps of any height, flat steps, and down
//! steps of height `1..=k-1`, never going below the axis.
//!
//! A threshold sequence maps to the path with rises `s_i - s_{i-1} - k`, so
//! the height after step `i` is `s_i - i k`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{PathError, SequenceError};
use crate::threshold::{validate, ThresholdParams, ThresholdSequence};

/// Path stored as its list of rises. JSON form: `{"k":int,"rises":[int,...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PathJson", into = "PathJson")]
pub struct ExtMotzkinPath {
    k: u32,
    rises: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct PathJson {
    k: u32,
    rises: Vec<i64>,
}

impl TryFrom<PathJson> for ExtMotzkinPath {
    type Error = PathError;

    fn try_from(json: PathJson) -> Result<Self, PathError> {
        ExtMotzkinPath::new(json.k, json.rises)
    }
}

impl From<ExtMotzkinPath> for PathJson {
    fn from(path: ExtMotzkinPath) -> Self {
        PathJson { k: path.k, rises: path.rises }
    }
}

impl ExtMotzkinPath {
    pub fn new(k: u32, rises: Vec<i64>) -> Result<Self, PathError> {
        if k < 2 {
            return Err(PathError::InvalidParams(format!("k must be >= 2, got {k}")));
        }
        let mut height = 0i64;
        for (idx, &rise) in rises.iter().enumerate() {
            if rise < -(i64::from(k) - 1) {
                return Err(PathError::InvalidRise { index: idx + 1, rise, k });
            }
            height = height
                .checked_add(rise)
                .ok_or_else(|| PathError::InvalidParams("height overflow".into()))?;
            if height < 0 {
                return Err(PathError::BelowAxis { index: idx + 1 });
            }
        }
        Ok(Self { k, rises })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn rises(&self) -> &[i64] {
        &self.rises
    }

    pub fn len(&self) -> usize {
        self.rises.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rises.is_empty()
    }

    /// Heights `y_1..y_n` after each step.
    pub fn heights(&self) -> Vec<i64> {
        self.rises
            .iter()
            .scan(0i64, |y, r| {
                *y += r;
                Some(*y)
            })
            .collect()
    }

    pub fn end_height(&self) -> i64 {
        self.rises.iter().sum()
    }

    pub fn is_classic_motzkin(&self) -> bool {
        is_classic_motzkin(self)
    }

    /// Character-grid rendering with `*` at every lattice point visited.
    pub fn render_ascii(&self) -> String {
        let mut points = vec![0i64];
        points.extend(self.heights());
        let top = points.iter().copied().max().unwrap_or(0);
        let mut out = String::new();
        for row in (0..=top).rev() {
            let line: String = points.iter().map(|&y| if y == row { '*' } else { ' ' }).collect();
            let _ = writeln!(out, "{:>3} |{}", row, line.trim_end());
        }
        let _ = writeln!(out, "    +{}", "-".repeat(points.len()));
        out
    }
}

/// Path of an offset-0 threshold sequence, with `s_0 = 0`.
pub fn path_of(seq: &ThresholdSequence) -> Result<ExtMotzkinPath, PathError> {
    let params = seq.params();
    if params.d != 0 {
        return Err(SequenceError::NonZeroOffset(params.d).into());
    }
    let k = i64::from(params.k);
    let rises = std::iter::once(0)
        .chain(seq.values().iter().copied())
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| w[1] - w[0] - k)
        .collect();
    let path = ExtMotzkinPath { k: params.k, rises };
    debug_assert!(ExtMotzkinPath::new(path.k, path.rises.clone()).is_ok());
    Ok(path)
}

/// Inverse of [`path_of`]: `s_i = y_i + i k`, read as a (k,l)-sequence.
pub fn sequence_of_path(path: &ExtMotzkinPath, l: u32) -> Result<ThresholdSequence, PathError> {
    let height = path.end_height();
    if height > i64::from(l) {
        return Err(PathError::HeightExceedsL { height, l });
    }
    let params = ThresholdParams::new(path.k, l, path.len())?;
    let k = i64::from(path.k);
    let values = path
        .heights()
        .into_iter()
        .enumerate()
        .map(|(idx, y)| y + (idx as i64 + 1) * k)
        .collect();
    Ok(validate(values, params)?)
}

/// Rises restricted to `{-1, 0, 1}` and ending on the axis.
pub fn is_classic_motzkin(path: &ExtMotzkinPath) -> bool {
    path.rises.iter().all(|r| (-1..=1).contains(r)) && path.end_height() == 0
}

/// Every (k,l)-extended path of length `n`, depth-first with rises tried in
/// increasing order.
///
/// Since a step drops at most `k - 1`, a path that must end at height `<= l`
/// satisfies `y_i <= l + (n - i)(k - 1)`. That bounds the up steps, and every
/// prefix within the bound completes.
pub fn enumerate_paths(k: u32, l: u32, n: usize) -> Result<Paths, PathError> {
    if k < 2 || l > k - 2 {
        return Err(PathError::InvalidParams(format!("need k >= 2 and 0 <= l <= k-2, got k={k} l={l}")));
    }
    if n == 0 {
        return Err(PathError::InvalidParams("paths have length n >= 1".into()));
    }
    Ok(Paths { k, l, n, current: None, done: false })
}

/// Iterator returned by [`enumerate_paths`].
#[derive(Clone, Debug)]
pub struct Paths {
    k: u32,
    l: u32,
    n: usize,
    current: Option<Vec<i64>>,
    done: bool,
}

impl Paths {
    fn max_rise(&self, step: usize, height: i64) -> i64 {
        i64::from(self.l) + (self.n - step) as i64 * (i64::from(self.k) - 1) - height
    }

    fn min_rise(&self, height: i64) -> i64 {
        (-(i64::from(self.k) - 1)).max(-height)
    }

    fn fill_from(&self, rises: &mut [i64], start: usize) {
        let mut height: i64 = rises[..start].iter().sum();
        for r in &mut rises[start..] {
            *r = self.min_rise(height);
            height += *r;
        }
    }
}

impl Iterator for Paths {
    type Item = ExtMotzkinPath;

    fn next(&mut self) -> Option<ExtMotzkinPath> {
        if self.done {
            return None;
        }
        let rises = match self.current.take() {
            None => {
                let mut rises = vec![0; self.n];
                self.fill_from(&mut rises, 0);
                rises
            }
            Some(mut rises) => {
                let heights: Vec<i64> = std::iter::once(0)
                    .chain(rises.iter().scan(0i64, |y, r| {
                        *y += r;
                        Some(*y)
                    }))
                    .collect();
                let movable = (0..self.n).rev().find(|&idx| rises[idx] < self.max_rise(idx + 1, heights[idx]));
                let Some(idx) = movable else {
                    self.done = true;
                    return None;
                };
                rises[idx] += 1;
                self.fill_from(&mut rises, idx + 1);
                rises
            }
        };
        self.current = Some(rises.clone());
        Some(ExtMotzkinPath { k: self.k, rises })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{catalan, motzkin, raney, ExactInt};
    use crate::threshold::enumerate;
    use std::collections::HashSet;

    fn seq(values: &[i64], k: u32, l: u32) -> ThresholdSequence {
        validate(values.to_vec(), ThresholdParams::new(k, l, values.len()).unwrap()).unwrap()
    }

    // All rise vectors in a generous box, filtered by the path definition.
    fn brute_force(k: u32, l: u32, n: usize) -> Vec<Vec<i64>> {
        let lo = -(i64::from(k) - 1);
        let hi = i64::from(l) + n as i64 * i64::from(k);
        let mut out: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| (lo..=hi).map(move |r| [p.clone(), vec![r]].concat()))
                .filter(|p| p.iter().scan(0, |y, r| { *y += r; Some(*y) }).all(|y| y >= 0))
                .collect();
        }
        out.retain(|p| p.iter().sum::<i64>() <= i64::from(l));
        out
    }

    #[test]
    fn example_path() {
        let s = seq(&[7, 15, 16, 21, 28, 30, 38], 5, 3);
        let p = path_of(&s).unwrap();
        assert_eq!(p.rises(), &[2, 3, -4, 0, 2, -3, 3]);
        assert_eq!(p.end_height(), 3);
        assert_eq!(sequence_of_path(&p, 3).unwrap(), s);
    }

    #[test]
    fn staircase_is_flat() {
        let s = seq(&[4, 8, 12, 16], 4, 2);
        let p = path_of(&s).unwrap();
        assert_eq!(p.rises(), &[0, 0, 0, 0]);
        assert_eq!(sequence_of_path(&p, 2).unwrap(), s);
        let flat = ExtMotzkinPath::new(3, vec![0; 5]).unwrap();
        assert_eq!(sequence_of_path(&flat, 0).unwrap().values(), &[3, 6, 9, 12, 15]);
    }

    #[test]
    fn path_validation() {
        assert_eq!(ExtMotzkinPath::new(3, vec![1, -2]), Err(PathError::BelowAxis { index: 2 }));
        assert_eq!(
            ExtMotzkinPath::new(3, vec![5, -3]),
            Err(PathError::InvalidRise { index: 2, rise: -3, k: 3 })
        );
        let p = ExtMotzkinPath::new(3, vec![2]).unwrap();
        assert_eq!(sequence_of_path(&p, 1), Err(PathError::HeightExceedsL { height: 2, l: 1 }));
    }

    #[test]
    fn every_31_sequence_of_length_3_gives_a_path() {
        for s in enumerate(ThresholdParams::new(3, 1, 3).unwrap()).unwrap() {
            let p = path_of(&s).unwrap();
            assert!(ExtMotzkinPath::new(3, p.rises().to_vec()).is_ok());
            assert!((0..=1).contains(&p.end_height()));
            assert_eq!(p.end_height() == 1, s.is_proper());
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for k in 2..=4 {
            for l in 0..=k - 2 {
                for n in 1..=4 {
                    let got: Vec<_> = enumerate_paths(k, l, n).unwrap().map(|p| p.rises).collect();
                    assert_eq!(got, brute_force(k, l, n), "k={k} l={l} n={n}");
                }
            }
        }
    }

    #[test]
    fn length_one_paths() {
        for k in 2..=6 {
            for l in 0..=k - 2 {
                let rises: Vec<_> = enumerate_paths(k, l, 1).unwrap().map(|p| p.rises[0]).collect();
                assert_eq!(rises, (0..=i64::from(l)).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn counts_and_classic_filter() {
        let all: Vec<_> = enumerate_paths(2, 0, 4).unwrap().collect();
        assert_eq!(all.len(), 14);
        assert_eq!(all.iter().filter(|p| p.is_classic_motzkin()).count(), 9);
        assert_eq!(all.iter().filter(|p| !p.is_classic_motzkin()).count(), 5);
        assert_eq!(ExactInt::from(enumerate_paths(3, 1, 3).unwrap().count()), raney(3, 2, 3).unwrap());
        for n in 1..=10 {
            let paths: Vec<_> = enumerate_paths(2, 0, n).unwrap().collect();
            assert_eq!(ExactInt::from(paths.len()), catalan(n as u64));
            let classic = paths.iter().filter(|p| p.is_classic_motzkin()).count();
            assert_eq!(ExactInt::from(classic), motzkin(n as u64));
        }
    }

    #[test]
    fn classic_predicate() {
        assert!(ExtMotzkinPath::new(2, vec![1, 0, -1, 0]).unwrap().is_classic_motzkin());
        assert!(!ExtMotzkinPath::new(3, vec![2, -1, -1, 0]).unwrap().is_classic_motzkin());
        assert!(!ExtMotzkinPath::new(2, vec![1, 0]).unwrap().is_classic_motzkin());
    }

    #[test]
    fn round_trip_42_length_4() {
        let paths: Vec<_> = enumerate_paths(4, 2, 4).unwrap().collect();
        let mut seqs = HashSet::new();
        for p in &paths {
            let s = sequence_of_path(p, 2).unwrap();
            assert_eq!(&path_of(&s).unwrap(), p);
            seqs.insert(s);
        }
        let all: HashSet<_> = enumerate(ThresholdParams::new(4, 2, 4).unwrap()).unwrap().collect();
        assert_eq!(seqs, all);
    }

    #[test]
    fn ascii_and_json() {
        let p = ExtMotzkinPath::new(2, vec![1, 0, -1]).unwrap();
        assert_eq!(p.render_ascii(), "  1 | **\n  0 |*  *\n    +----\n");
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"k":2,"rises":[1,0,-1]}"#);
        assert_eq!(serde_json::from_str::<ExtMotzkinPath>(&text).unwrap(), p);
        assert!(serde_json::from_str::<ExtMotzkinPath>(r#"{"k":2,"rises":[-1]}"#).is_err());
    }
}
