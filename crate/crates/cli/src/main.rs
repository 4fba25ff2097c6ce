//! `raney`: count, enumerate, map and verify threshold sequences, k-ary tree
//! tuples and extended Motzkin paths.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on invalid input.

mod input;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use raney::ballot::{from_ballot, to_ballot};
use raney::budget::{WithBudget, DEFAULT_BUDGET};
use raney::exactmath::{fuss_catalan, raney as raney_number};
use raney::paths::{enumerate_paths, path_of, sequence_of_path, ExtMotzkinPath};
use raney::threshold::{count, count_proper, enumerate, ThresholdParams, ThresholdSequence};
use raney::trees::{enumerate_trees, enumerate_tuples, sequence_of_tuple, tuple_of, KaryTree, TreeTuple};
use raney::verify::{self, VerifyReport};

#[derive(Parser, Debug)]
#[command(name = "raney", version, about = "Threshold sequences, k-ary tree tuples and extended Motzkin paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the number of (k,l)-threshold sequences of length n.
    Count {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long)]
        n: usize,
        /// Count only proper sequences.
        #[arg(long)]
        proper: bool,
    },
    /// Stream every object of a family, one per line.
    Enumerate {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long)]
        n: usize,
        /// Offset applied to enumerated sequences.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, value_enum, default_value_t = Object::Sequences)]
        object: Object,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, env = "RANEY_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Map one object through a bijection. Reads standard input when no object flag is given.
    Map {
        #[arg(value_enum)]
        direction: Direction,
        #[arg(long)]
        k: Option<u32>,
        /// Defaults to the smallest l that admits the input.
        #[arg(long)]
        l: Option<u32>,
        /// Comma-separated sequence values.
        #[arg(long, allow_hyphen_values = true)]
        seq: Option<String>,
        /// Tuple of trees in JSON.
        #[arg(long)]
        tuple: Option<String>,
        /// Single tree in JSON, read as a 1-tuple.
        #[arg(long)]
        tree: Option<String>,
        /// Comma-separated rises or path JSON.
        #[arg(long, allow_hyphen_values = true)]
        path: Option<String>,
        /// Ballot word over {A, B}.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run enumeration and bijection suites; exit 1 on any failure.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Restrict to a single cell (requires --l and --n as well).
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        /// Largest count a grid cell may have.
        #[arg(long, default_value_t = 1_000_000)]
        max_count: u64,
        /// Largest count for bijection cells.
        #[arg(long, default_value_t = 100_000)]
        bijection_cap: u64,
        /// Lengths used by the ballot measurement.
        #[arg(long, default_value_t = 6)]
        ballot_n_max: usize,
        #[arg(long, env = "RANEY_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Emit full JSON reports instead of summary lines.
        #[arg(long)]
        json: bool,
    },
    /// Run every exact identity suite; exit 1 on any failure.
    Identities {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Object {
    Sequences,
    Trees,
    Tuples,
    Paths,
    Ballots,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Ascii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Direction {
    SeqToTrees,
    TreesToSeq,
    SeqToPath,
    PathToSeq,
    SeqToBallot,
    BallotToSeq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Counts,
    Proper,
    Bijections,
    Ballot,
    All,
}

enum Failure {
    Invalid(String),
    Verification,
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<raney::Error> for Failure {
    fn from(e: raney::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|()| out.flush().map_err(Failure::Io));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Outcome {
    match command {
        Command::Count { k, l, n, proper } => {
            let params = ThresholdParams::new(k, l, n).map_err(invalid)?;
            let value = if proper { count_proper(params) } else { count(params) };
            writeln!(out, "{value}")?;
            Ok(())
        }
        Command::Enumerate { k, l, n, d, object, format, budget } => {
            enumerate_objects(out, k, l, n, d, object, format, budget)
        }
        Command::Map { direction, k, l, seq, tuple, tree, path, word, format } => {
            let objects = MapInputs { k, l, seq, tuple, tree, path, word };
            map_object(out, direction, objects, format)
        }
        Command::Verify { suite, k, l, n, max_count, bijection_cap, ballot_n_max, budget, json } => {
            let cells = match (k, l, n) {
                (Some(k), Some(l), Some(n)) => Some(vec![(k, l, n)]),
                (None, None, None) => None,
                _ => return Err(invalid("--k, --l and --n must be given together")),
            };
            if let Some(cells) = &cells {
                for &(k, l, n) in cells {
                    ThresholdParams::new(k, l, n).map_err(invalid)?;
                }
            }
            let settings = VerifySettings { cells, max_count, bijection_cap, ballot_n_max, budget, json };
            run_verify(out, suite, &settings)
        }
        Command::Identities { json } => {
            let reports = verify::identity_suites()?;
            emit_reports(out, &reports, json)
        }
    }
}

fn check_budget(expected: raney::ExactInt, budget: usize) -> Outcome {
    if expected > raney::ExactInt::from(budget) {
        return Err(invalid(format!("{expected} objects exceed the budget of {budget}")));
    }
    Ok(())
}

fn write_sequence(out: &mut impl Write, s: &ThresholdSequence, format: Format) -> Outcome {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(s).expect("serializable"))?,
        Format::Csv => writeln!(out, "{}", join(s.values(), ","))?,
        Format::Ascii => writeln!(out, "{}", join(s.values(), " "))?,
        Format::Dot => return Err(invalid("dot output is only available for trees and tuples")),
    }
    Ok(())
}

fn write_tuple(out: &mut impl Write, t: &TreeTuple, format: Format, index: usize) -> Outcome {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(t).expect("serializable"))?,
        Format::Dot => write!(out, "{}", t.to_dot(&format!("tuple{index}"), t.internal_count() > 0))?,
        _ => return Err(invalid("tuples support json and dot output")),
    }
    Ok(())
}

fn write_tree(out: &mut impl Write, t: &KaryTree, format: Format, index: usize) -> Outcome {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(t).expect("serializable"))?,
        Format::Dot => write!(out, "{}", t.to_dot(&format!("tree{index}"), None))?,
        _ => return Err(invalid("trees support json and dot output")),
    }
    Ok(())
}

fn write_path(out: &mut impl Write, p: &ExtMotzkinPath, format: Format) -> Outcome {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(p).expect("serializable"))?,
        Format::Csv => writeln!(out, "{}", join(p.rises(), ","))?,
        Format::Ascii => writeln!(out, "{}", p.render_ascii())?,
        Format::Dot => return Err(invalid("dot output is only available for trees and tuples")),
    }
    Ok(())
}

fn join(values: &[i64], sep: &str) -> String {
    values.iter().map(i64::to_string).collect::<Vec<_>>().join(sep)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_objects(
    out: &mut impl Write,
    k: u32,
    l: u32,
    n: usize,
    d: i64,
    object: Object,
    format: Format,
    budget: usize,
) -> Outcome {
    let params = ThresholdParams::with_offset(k, l, n, d).map_err(invalid)?;
    if n == 0 && object != Object::Trees && object != Object::Tuples {
        return Err(invalid("n must be >= 1"));
    }
    if d != 0 && object != Object::Sequences {
        return Err(invalid("--d only applies to sequences"));
    }
    match object {
        Object::Sequences => {
            check_budget(count(params), budget)?;
            for s in enumerate(params).map_err(invalid)?.with_budget(budget) {
                write_sequence(out, &s.map_err(invalid)?, format)?;
            }
        }
        Object::Trees => {
            check_budget(fuss_catalan(k, n as u64).map_err(invalid)?, budget)?;
            for (i, t) in enumerate_trees(k, n).map_err(invalid)?.with_budget(budget).enumerate() {
                write_tree(out, &t.map_err(invalid)?, format, i)?;
            }
        }
        Object::Tuples => {
            check_budget(raney_number(k, l + 1, n as u64).map_err(invalid)?, budget)?;
            for (i, t) in enumerate_tuples(k, l as usize + 1, n).map_err(invalid)?.with_budget(budget).enumerate() {
                write_tuple(out, &t.map_err(invalid)?, format, i)?;
            }
        }
        Object::Paths => {
            check_budget(count(params), budget)?;
            for p in enumerate_paths(k, l, n).map_err(invalid)?.with_budget(budget) {
                write_path(out, &p.map_err(invalid)?, format)?;
            }
        }
        Object::Ballots => {
            check_budget(count(params), budget)?;
            for s in enumerate(params).map_err(invalid)?.with_budget(budget) {
                let word = to_ballot(&s.map_err(invalid)?).map_err(invalid)?;
                writeln!(out, "{word}")?;
            }
        }
    }
    Ok(())
}

struct MapInputs {
    k: Option<u32>,
    l: Option<u32>,
    seq: Option<String>,
    tuple: Option<String>,
    tree: Option<String>,
    path: Option<String>,
    word: Option<String>,
}

impl MapInputs {
    fn sequence(&self) -> Result<ThresholdSequence, Failure> {
        let text = input::flag_or_stdin(self.seq.as_deref()).map_err(invalid)?;
        let seq = input::parse_sequence(&text, self.k, self.l).map_err(invalid)?;
        if seq.params().d != 0 {
            return Err(invalid("bijections are defined for offset 0"));
        }
        Ok(seq)
    }

    fn k(&self) -> Result<u32, Failure> {
        self.k.ok_or_else(|| invalid("--k is required"))
    }
}

fn map_object(out: &mut impl Write, direction: Direction, inputs: MapInputs, format: Format) -> Outcome {
    match direction {
        Direction::SeqToTrees => {
            let tuple = tuple_of(&inputs.sequence()?).map_err(invalid)?;
            write_tuple(out, &tuple, format, 0)
        }
        Direction::TreesToSeq => {
            let k = inputs.k()?;
            let tuple = match (&inputs.tuple, &inputs.tree) {
                (Some(_), Some(_)) => return Err(invalid("give either --tuple or --tree")),
                (None, Some(tree)) => input::parse_tree_as_tuple(tree, k),
                (tuple, None) => input::parse_tuple(&input::flag_or_stdin(tuple.as_deref()).map_err(invalid)?, k),
            }
            .map_err(invalid)?;
            let seq = sequence_of_tuple(&tuple).map_err(invalid)?;
            write_sequence(out, &seq, format)
        }
        Direction::SeqToPath => {
            let path = path_of(&inputs.sequence()?).map_err(invalid)?;
            write_path(out, &path, format)
        }
        Direction::PathToSeq => {
            let text = input::flag_or_stdin(inputs.path.as_deref()).map_err(invalid)?;
            let path = input::parse_path(&text, inputs.k).map_err(invalid)?;
            let l = inputs.l.unwrap_or_else(|| path.end_height().max(0) as u32);
            let seq = sequence_of_path(&path, l).map_err(invalid)?;
            write_sequence(out, &seq, format)
        }
        Direction::SeqToBallot => {
            let word = to_ballot(&inputs.sequence()?).map_err(invalid)?;
            writeln!(out, "{word}")?;
            Ok(())
        }
        Direction::BallotToSeq => {
            let k = inputs.k()?;
            let text = input::flag_or_stdin(inputs.word.as_deref()).map_err(invalid)?;
            let word = input::parse_word(&text, k);
            // Smallest admissible l: the word has s_n + 1 letters A and n letters B.
            let l = inputs.l.unwrap_or_else(|| {
                let excess = word.count_a() as i64 - 1 - i64::from(k) * word.count_b() as i64;
                excess.max(0) as u32
            });
            let seq = from_ballot(&word, k, l).map_err(invalid)?;
            write_sequence(out, &seq, format)
        }
    }
}

struct VerifySettings {
    cells: Option<Vec<(u32, u32, usize)>>,
    max_count: u64,
    bijection_cap: u64,
    ballot_n_max: usize,
    budget: usize,
    json: bool,
}

impl VerifySettings {
    fn grid(&self, max_count: u64) -> Vec<(u32, u32, usize)> {
        self.cells.clone().unwrap_or_else(|| verify::count_grid(2..=5, max_count))
    }
}

fn emit_reports(out: &mut impl Write, reports: &[VerifyReport], json: bool) -> Outcome {
    for report in reports {
        if json {
            writeln!(out, "{}", serde_json::to_string(report).expect("serializable"))?;
        } else {
            writeln!(out, "{}", report.summary())?;
            for cell in report.failures() {
                writeln!(out, "  failed {}: expected {}, observed {}", cell.params, cell.expected, cell.observed)?;
                if let Some(example) = &cell.counterexample {
                    writeln!(out, "    counterexample {example}")?;
                }
            }
        }
    }
    if reports.iter().all(VerifyReport::passed) {
        Ok(())
    } else {
        out.flush()?;
        Err(Failure::Verification)
    }
}

fn run_verify(out: &mut impl Write, suite: Suite, settings: &VerifySettings) -> Outcome {
    let budget = settings.budget;
    let mut reports = Vec::new();
    if matches!(suite, Suite::Counts | Suite::All) {
        let grid = settings.grid(settings.max_count);
        reports.push(verify::run_cells("counts", &grid, |k, l, n| verify::check_counts(k, l, n, budget))?);
    }
    if matches!(suite, Suite::Proper | Suite::All) {
        let grid = settings.grid(settings.max_count);
        reports.push(verify::run_cells("proper-counts", &grid, |k, l, n| {
            verify::check_proper_counts(k, l, n, budget)
        })?);
    }
    if matches!(suite, Suite::Bijections | Suite::All) {
        let grid = settings.grid(settings.bijection_cap);
        reports.push(verify::run_cells("bijections", &grid, |k, l, n| {
            verify::check_bijections(k, l, n, budget)
        })?);
    }
    let ballot_ok = if matches!(suite, Suite::Ballot | Suite::All) {
        let report = verify::measure_ballot_claim(&[2, 3], settings.ballot_n_max)?;
        if settings.json || suite == Suite::Ballot {
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?;
        } else {
            writeln!(
                out,
                "{} ballot: all-sequences reading matches={}, strict reading matches={}, round-trip failures={}",
                if report.round_trip_failures == 0 { "PASS" } else { "FAIL" },
                report.all_sequences_reading_matches,
                report.strict_reading_matches,
                report.round_trip_failures
            )?;
        }
        report.round_trip_failures == 0
    } else {
        true
    };
    let result = emit_reports(out, &reports, settings.json);
    match result {
        Ok(()) if !ballot_ok => Err(Failure::Verification),
        other => other,
    }
}
