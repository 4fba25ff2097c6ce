//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always printed.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use raney::budget::DEFAULT_BUDGET;
use raney::exactmath::{motzkin, raney};
use raney::paths::{enumerate_paths, is_classic_motzkin, path_of, sequence_of_path};
use raney::threshold::{cut_index, enumerate, is_proper, validate, ThresholdParams};
use raney::trees::{sequence_of_tuple, tuple_of, KaryTree, TreeTuple};
use raney::verify::{self, VerifyReport};
use raney::ExactInt;
use serde_json::{json, Value};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const GRID_CAP: u64 = 1_000_000;
const BIJECTION_CAP: u64 = 100_000;

fn grid(cap: u64) -> Vec<(u32, u32, usize)> {
    verify::count_grid(2..=5, cap)
}

fn report_outcome(reports: &[VerifyReport]) -> Outcome {
    let cells: usize = reports.iter().map(|r| r.cells.len()).sum();
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures().map(move |c| format!("{}: {} ({} != {})", r.suite, c.params, c.expected, c.observed)))
        .collect();
    if failed.is_empty() {
        Ok(format!("{cells} cells"))
    } else {
        Err(format!("{} of {cells} cells failed; first: {}", failed.len(), failed[0]))
    }
}

fn ensure(condition: bool, what: impl Into<String>) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn counts() -> Outcome {
    let cells = grid(GRID_CAP);
    for k in 2..=4u32 {
        for l in 0..=k - 2 {
            ensure(cells.contains(&(k, l, 7)), format!("grid lacks k={k} l={l} n=7"))?;
        }
    }
    let report = verify::run_cells("counts", &cells, |k, l, n| verify::check_counts(k, l, n, DEFAULT_BUDGET))
        .map_err(|e| e.to_string())?;
    report_outcome(&[report]).map(|s| format!("{} grid cells, {s}", cells.len()))
}

fn constants() -> Outcome {
    let seq = |k, l, values: &[i64]| {
        ThresholdParams::new(k, l, values.len()).and_then(|p| validate(values.to_vec(), p))
    };
    let ternary = |r, n| raney(3, r, n).map_err(|e| e.to_string());
    ensure(ternary(1, 1)? == 1.into() && ternary(1, 2)? == 3.into(), "a_1, a_2")?;
    ensure(ternary(2, 1)? == 2.into() && ternary(2, 2)? == 7.into(), "b_1, b_2")?;
    for (l, expected) in [(0u32, [1u32, 3]), (1, [2, 7])] {
        for (n, &want) in (1..=2).zip(expected.iter()) {
            let params = ThresholdParams::new(3, l, n).map_err(|e| e.to_string())?;
            let enumerated = enumerate(params).map_err(|e| e.to_string())?.count();
            ensure(enumerated == want as usize, format!("enumerated (3,{l}) n={n}"))?;
        }
    }

    let paths: Vec<_> = enumerate_paths(2, 0, 4).map_err(|e| e.to_string())?.collect();
    let classic = paths.iter().filter(|p| is_classic_motzkin(p)).count();
    ensure(paths.len() == 14, format!("{} extended 4-paths", paths.len()))?;
    ensure(classic == 9 && motzkin(4) == 9.into(), format!("{classic} classic 4-paths"))?;

    let s1 = [3, 6, 14, 15, 17, 18];
    let s2 = [3, 6, 14, 15, 17, 19];
    let s3 = [3, 4, 14, 15, 17, 18];
    ensure(seq(3, 0, &s1).is_ok_and(|s| is_proper(&s)), "s1 proper (3,0)")?;
    ensure(seq(3, 1, &s2).is_ok_and(|s| is_proper(&s)), "s2 proper (3,1)")?;
    ensure(seq(3, 1, &s1).is_ok_and(|s| !is_proper(&s)), "s1 (3,1) but not proper")?;
    ensure(seq(3, 0, &s2).is_err(), "s2 not (3,0)")?;
    ensure(seq(3, 0, &s3).is_err(), "s3 not (3,0)")?;

    let v = seq(4, 2, &[7, 9, 17, 18]).map_err(|e| e.to_string())?;
    ensure(cut_index(&v) == Ok(2), "cut index of V")?;
    let leaves = json!([null, null, null, null]);
    let expected = TreeTuple::from_json(
        &json!([null, [null, leaves, null, null], [leaves, null, null, null]]),
        4,
    )
    .map_err(|e| e.to_string())?;
    let tuple = tuple_of(&v).map_err(|e| e.to_string())?;
    ensure(tuple == expected, format!("tuple of V: {}", serde_json::to_string(&tuple).unwrap_or_default()))?;
    ensure(tuple.trees()[0] == KaryTree::leaf(4).map_err(|e| e.to_string())?, "first tree trivial")?;
    ensure(sequence_of_tuple(&tuple).as_ref() == Ok(&v), "tuple of V inverts")?;

    let s = seq(5, 3, &[7, 15, 16, 21, 28, 30, 38]).map_err(|e| e.to_string())?;
    let path = path_of(&s).map_err(|e| e.to_string())?;
    ensure(path.rises() == [2, 3, -4, 0, 2, -3, 3], format!("rises {:?}", path.rises()))?;
    ensure(path.end_height() == 3, "end height 3")?;
    ensure(sequence_of_path(&path, 3).as_ref() == Ok(&s), "path inverts")?;
    Ok("ternary constants, 4-paths, classification, cut index, tuple, rises".into())
}

fn bijections() -> Outcome {
    let cells = grid(BIJECTION_CAP);
    let report = verify::run_cells("bijections", &cells, |k, l, n| verify::check_bijections(k, l, n, DEFAULT_BUDGET))
        .map_err(|e| e.to_string())?;
    report_outcome(&[report]).map(|s| format!("{} grid cells, {s}", cells.len()))
}

fn identities() -> Outcome {
    let reports = verify::identity_suites().map_err(|e| e.to_string())?;
    report_outcome(&reports).map(|s| format!("{} suites, {s}", reports.len()))
}

fn proper_counts() -> Outcome {
    let cells = grid(GRID_CAP);
    let report = verify::run_cells("proper-counts", &cells, |k, l, n| {
        verify::check_proper_counts(k, l, n, DEFAULT_BUDGET)
    })
    .map_err(|e| e.to_string())?;
    // Independent of check_proper_counts: for l >= 1 the proper count is R_{n-1}^{(k,k+l)}.
    for &(k, l, n) in cells.iter().filter(|c| c.1 >= 1) {
        let params = ThresholdParams::new(k, l, n).map_err(|e| e.to_string())?;
        let proper = enumerate(params).map_err(|e| e.to_string())?.filter(is_proper).count();
        let shifted = raney(k, k + l, n as u64 - 1).map_err(|e| e.to_string())?;
        ensure(ExactInt::from(proper) == shifted, format!("k={k} l={l} n={n}: {proper} != {shifted}"))?;
    }
    report_outcome(&[report]).map(|s| format!("{} grid cells, {s}", cells.len()))
}

fn oeis() -> Outcome {
    let report = verify::check_oeis_prefixes().map_err(|e| e.to_string())?;
    for n in 0..8u64 {
        let t = raney(3, 1, n).map_err(|e| e.to_string())?;
        let u = raney(3, 2, n).map_err(|e| e.to_string())?;
        ensure(t == verify::OEIS_TERNARY_TREES[n as usize].into(), format!("T_{n}"))?;
        ensure(u == verify::OEIS_TERNARY_PAIRS[n as usize].into(), format!("U_{n}"))?;
        let d = raney(3, 2, n + 1).map_err(|e| e.to_string())? - raney(3, 1, n + 1).map_err(|e| e.to_string())?;
        ensure(d == verify::OEIS_TERNARY_QUADRUPLES[n as usize].into(), format!("U_{0} - T_{0}", n + 1))?;
    }
    report_outcome(&[report])
}

fn artifact_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/ballot_claim_report.json")
}

fn ballot() -> Outcome {
    let report = verify::measure_ballot_claim(&[2, 3], 6).map_err(|e| e.to_string())?;
    ensure(report.round_trip_failures == 0, format!("{} round-trip failures", report.round_trip_failures))?;
    let measured = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    let path = artifact_path();
    let text = std::fs::read_to_string(&path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    let stored: Value = serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))?;
    ensure(stored == measured, "persisted ballot report is stale; regenerate with `raney verify ballot`")?;
    let reading = match (report.all_sequences_reading_matches, report.strict_reading_matches) {
        (true, true) => "both readings match",
        (true, false) => "all-sequences reading matches, strict reading does not",
        (false, true) => "strict reading matches, all-sequences reading does not",
        (false, false) => "neither reading matches",
    };
    Ok(format!("{} cells; {reading}; round trip clean; artifact current", report.cells.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 count reproduction", counts),
        ("2 reference constants", constants),
        ("3 bijection suites", bijections),
        ("4 identity suites", identities),
        ("5 proper counts", proper_counts),
        ("6 OEIS prefixes", oeis),
        ("7 ballot measurement", ballot),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

