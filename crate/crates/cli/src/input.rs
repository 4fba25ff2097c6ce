//! Parsing of objects given on the command line or standard input.

use std::io::Read;

use raney::ballot::BallotWord;
use raney::paths::ExtMotzkinPath;
use raney::threshold::{validate, ThresholdParams, ThresholdSequence};
use raney::trees::{KaryTree, TreeTuple};
use serde_json::Value;

pub type InputResult<T> = Result<T, String>;

/// Flag value, or the whole of standard input when the flag is absent.
pub fn flag_or_stdin(flag: Option<&str>) -> InputResult<String> {
    match flag {
        Some(text) => Ok(text.to_string()),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| format!("reading stdin: {e}"))?;
            Ok(buf)
        }
    }
}

pub fn parse_int_list(text: &str) -> InputResult<Vec<i64>> {
    let trimmed = text.trim().trim_start_matches('[').trim_end_matches(']');
    trimmed
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|e| format!("bad integer {t:?}: {e}")))
        .collect()
}

fn smallest_l(values: &[i64], k: u32) -> u32 {
    let excess = values.last().copied().unwrap_or(0) - i64::from(k) * values.len() as i64;
    excess.clamp(0, i64::from(u32::MAX)) as u32
}

/// A sequence given as a JSON object or as comma-separated values.
///
/// For a bare list, `k` is required and `l` defaults to the smallest value
/// that admits the sequence, so the sequence is read as proper.
pub fn parse_sequence(text: &str, k: Option<u32>, l: Option<u32>) -> InputResult<ThresholdSequence> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let seq: ThresholdSequence = serde_json::from_str(trimmed).map_err(|e| format!("sequence JSON: {e}"))?;
        return match l {
            Some(l) if l != seq.params().l => seq.with_l(l).map_err(|e| e.to_string()),
            _ => Ok(seq),
        };
    }
    let k = k.ok_or("--k is required for a comma-separated sequence")?;
    let values = parse_int_list(trimmed)?;
    let l = l.unwrap_or_else(|| smallest_l(&values, k));
    let params = ThresholdParams::new(k, l, values.len()).map_err(|e| e.to_string())?;
    validate(values, params).map_err(|e| e.to_string())
}

fn parse_json(text: &str) -> InputResult<Value> {
    serde_json::from_str(text.trim()).map_err(|e| format!("JSON: {e}"))
}

pub fn parse_tuple(text: &str, k: u32) -> InputResult<TreeTuple> {
    TreeTuple::from_json(&parse_json(text)?, k).map_err(|e| e.to_string())
}

pub fn parse_tree_as_tuple(text: &str, k: u32) -> InputResult<TreeTuple> {
    let tree = KaryTree::from_json(&parse_json(text)?, k).map_err(|e| e.to_string())?;
    TreeTuple::new(k, vec![tree]).map_err(|e| e.to_string())
}

/// A path given as `{"k":..,"rises":[..]}` or as comma-separated rises.
pub fn parse_path(text: &str, k: Option<u32>) -> InputResult<ExtMotzkinPath> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| format!("path JSON: {e}"));
    }
    let k = k.ok_or("--k is required for a comma-separated path")?;
    ExtMotzkinPath::new(k, parse_int_list(trimmed)?).map_err(|e| e.to_string())
}

pub fn parse_word(text: &str, k: u32) -> BallotWord {
    BallotWord::new(k, text.trim())
}
