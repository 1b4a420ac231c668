//! Grid sweeps over the witness families, the exhaustive two-letter check at
//! `(m, n) = (2, 3)`, and seeded random conformance against the oracle.

use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automata::Dfa;
use crate::format::render_dfa;
use crate::oracle::{brute_force_overlap_with, enumerate_language};
use crate::overlap::{self, OverlapError};
use crate::par::{self, Execution};
use crate::witnesses::{self, WitnessError, WitnessKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    General,
    Binary,
    UnaryInfinite,
    UnaryFinite,
    UnaryMixed,
    Alphabet,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::General => "general",
            Family::Binary => "binary",
            Family::UnaryInfinite => "unary-infinite",
            Family::UnaryFinite => "unary-finite",
            Family::UnaryMixed => "unary-mixed",
            Family::Alphabet => "alphabet",
        }
    }

    /// Witness kinds used for the left and right operand. The exhaustive
    /// alphabet sweep has none.
    pub fn witness_kinds(self) -> Option<(WitnessKind, WitnessKind)> {
        Some(match self {
            Family::General => (WitnessKind::GeneralLeft, WitnessKind::GeneralRight),
            Family::Binary => (WitnessKind::BinaryLeft, WitnessKind::BinaryRight),
            Family::UnaryInfinite => (WitnessKind::UnaryLeft, WitnessKind::UnaryRight),
            Family::UnaryFinite => (WitnessKind::UnaryFinite, WitnessKind::UnaryFinite),
            Family::UnaryMixed => (WitnessKind::UnaryLeft, WitnessKind::UnaryFinite),
            Family::Alphabet => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal,
    AtLeast,
    AtMost,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::AtLeast => "at-least",
            Relation::AtMost => "at-most",
        }
    }

    pub fn holds(self, measured: u64, predicted: u64) -> bool {
        match self {
            Relation::Equal => measured == predicted,
            Relation::AtLeast => measured >= predicted,
            Relation::AtMost => measured <= predicted,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A measured cell whose relation to the prediction does not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{family} (m = {m}, n = {n}): measured {measured}, expected {relation} {predicted}")]
pub struct Violation {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    pub measured: u64,
    pub predicted: u64,
    pub relation: Relation,
}

/// One measured grid cell. Only constructible when its relation holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRecord {
    family: Family,
    m: usize,
    n: usize,
    measured: u64,
    predicted: u64,
    relation: Relation,
    elapsed: Duration,
}

impl ExperimentRecord {
    pub fn new(
        family: Family,
        m: usize,
        n: usize,
        measured: u64,
        predicted: u64,
        relation: Relation,
        elapsed: Duration,
    ) -> Result<Self, Violation> {
        if relation.holds(measured, predicted) {
            Ok(Self {
                family,
                m,
                n,
                measured,
                predicted,
                relation,
                elapsed,
            })
        } else {
            Err(Violation {
                family,
                m,
                n,
                measured,
                predicted,
                relation,
            })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn measured(&self) -> u64 {
        self.measured
    }

    pub fn predicted(&self) -> u64 {
        self.predicted
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    pub fn holds(&self) -> bool {
        self.relation.holds(self.measured, self.predicted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Overlap(#[from] OverlapError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("{}", list_violations(.violations))]
    Violations {
        violations: Vec<Violation>,
        records: Vec<ExperimentRecord>,
    },
    #[error("a {alphabet}-letter pair at (m, n) = ({m}, {n}) reached {max}, the general bound is {bound}")]
    BoundOnSmallAlphabet {
        m: usize,
        n: usize,
        alphabet: usize,
        max: u64,
        bound: u64,
    },
    #[error("{0}")]
    Precondition(&'static str),
}

fn list_violations(violations: &[Violation]) -> String {
    let mut out = format!("{} violated record(s)", violations.len());
    for v in violations {
        let _ = write!(out, "\n  {v}");
    }
    out
}

type Cell = Result<Vec<Result<ExperimentRecord, Violation>>, ExperimentError>;

fn collect(cells: Vec<Cell>) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let mut records = Vec::new();
    let mut violations = Vec::new();
    for cell in cells {
        for row in cell? {
            match row {
                Ok(r) => records.push(r),
                Err(v) => violations.push(v),
            }
        }
    }
    if violations.is_empty() {
        Ok(records)
    } else {
        Err(ExperimentError::Violations {
            violations,
            records,
        })
    }
}

fn grid(m: &RangeInclusive<usize>, n: &RangeInclusive<usize>) -> Vec<(usize, usize)> {
    m.clone()
        .flat_map(|i| n.clone().map(move |j| (i, j)))
        .collect()
}

fn measure(left: &Dfa, right: &Dfa) -> Result<(u64, Duration), ExperimentError> {
    let start = Instant::now();
    let sc = crate::overlap_dfa(left, right)?.state_count();
    Ok((sc as u64, start.elapsed()))
}

/// `W_m ⊙ W'_n` for every cell, expected to equal the general bound.
pub fn run_general_grid(
    m: RangeInclusive<usize>,
    n: RangeInclusive<usize>,
    exec: Execution,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let cells = par::map(exec, &grid(&m, &n), |&(m, n)| -> Cell {
        let left = witnesses::make_general_left(m, n)?;
        let right = witnesses::make_general_right(n)?;
        let predicted = witnesses::general_upper_bound(m, n)?;
        let (sc, elapsed) = measure(&left, &right)?;
        Ok(vec![ExperimentRecord::new(
            Family::General,
            m,
            n,
            sc,
            predicted,
            Relation::Equal,
            elapsed,
        )])
    });
    collect(cells)
}

/// The three unary cases. Two residue cycles are expected to give exactly
/// `m + n`. Two singletons `{a^(m-2)}`, `{a^(n-2)}` are expected to give
/// exactly `m + n - 3` (cells with `m, n >= 2`). A residue cycle with `m`
/// states against `{a^(n-2)}` is expected to give at most `n - 1` when
/// `m <= n - 2` and at most `m + n - 2` otherwise (cells with `n >= 2`).
pub fn run_unary_grid(
    m: RangeInclusive<usize>,
    n: RangeInclusive<usize>,
    exec: Execution,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let cells = par::map(exec, &grid(&m, &n), |&(m, n)| -> Cell {
        let mut rows = Vec::new();
        let (left, right) = witnesses::make_unary_witnesses(m, n)?;
        let (sc, elapsed) = measure(&left, &right)?;
        rows.push(ExperimentRecord::new(
            Family::UnaryInfinite,
            m,
            n,
            sc,
            (m + n) as u64,
            Relation::Equal,
            elapsed,
        ));
        if m >= 2 && n >= 2 {
            let left = witnesses::make_unary_finite(m - 2);
            let right = witnesses::make_unary_finite(n - 2);
            let (sc, elapsed) = measure(&left, &right)?;
            rows.push(ExperimentRecord::new(
                Family::UnaryFinite,
                m,
                n,
                sc,
                (m + n - 3) as u64,
                Relation::Equal,
                elapsed,
            ));
        }
        if n >= 2 {
            let right = witnesses::make_unary_finite(n - 2);
            let (sc, elapsed) = measure(&left, &right)?;
            let predicted = if m + 2 <= n { n - 1 } else { m + n - 2 };
            rows.push(ExperimentRecord::new(
                Family::UnaryMixed,
                m,
                n,
                sc,
                predicted as u64,
                Relation::AtMost,
                elapsed,
            ));
        }
        Ok(rows)
    });
    collect(cells)
}

/// `B_m ⊙ B'_n` for every cell: at least the binary lower bound and at most
/// the general bound.
pub fn run_binary_grid(
    m: RangeInclusive<usize>,
    n: RangeInclusive<usize>,
    exec: Execution,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let cells = par::map(exec, &grid(&m, &n), |&(m, n)| -> Cell {
        let left = witnesses::make_binary_left(m)?;
        let right = witnesses::make_binary_right(n)?;
        let lower = witnesses::binary_lower_bound(m, n)?;
        let upper = witnesses::general_upper_bound(m, n)?;
        let (sc, elapsed) = measure(&left, &right)?;
        let row =
            ExperimentRecord::new(Family::Binary, m, n, sc, lower, Relation::AtLeast, elapsed);
        let ceiling =
            ExperimentRecord::new(Family::Binary, m, n, sc, upper, Relation::AtMost, elapsed);
        Ok(match ceiling {
            Ok(_) => vec![row],
            Err(v) => vec![row, Err(v)],
        })
    });
    collect(cells)
}

/// Result of the exhaustive sweep over all two-letter operand pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetCheck {
    pub m: usize,
    pub n: usize,
    pub alphabet_size: usize,
    /// Operand pairs enumerated before filtering.
    pub pairs_total: u64,
    /// Pairs whose operands have state complexity exactly `m` and `n`.
    pub pairs_measured: u64,
    pub max_state_complexity: u64,
    pub general_bound: u64,
    /// Measured value for `B_m ⊙ B'_n`, found among the swept pairs.
    pub binary_witness: Option<u64>,
    pub elapsed: Duration,
}

impl AlphabetCheck {
    /// The sweep as a CSV record: the maximum is at most one below the
    /// general bound.
    pub fn record(&self) -> Result<ExperimentRecord, Violation> {
        ExperimentRecord::new(
            Family::Alphabet,
            self.m,
            self.n,
            self.max_state_complexity,
            self.general_bound - 1,
            Relation::AtMost,
            self.elapsed,
        )
    }
}

/// Every complete DFA with `states` states over `alphabet` letters and
/// initial state 0, in a fixed order.
pub fn all_dfas(states: usize, alphabet: usize) -> Vec<Dfa> {
    let cells = states * alphabet;
    let tables = states.pow(cells as u32);
    let mut out = Vec::with_capacity(tables << states);
    for code in 0..tables {
        let mut table = Vec::with_capacity(cells);
        let mut rest = code;
        for _ in 0..cells {
            table.push(rest % states);
            rest /= states;
        }
        for mask in 0..(1usize << states) {
            let finals: Vec<usize> = (0..states).filter(|q| mask >> q & 1 == 1).collect();
            out.push(Dfa::new(states, alphabet, table.clone(), 0, &finals).expect("in range"));
        }
    }
    out
}

/// Sweeps all pairs of two-letter DFAs with 2 and 3 states and reports the
/// largest overlap state complexity among pairs of minimal operands.
/// Fails if that maximum reaches the general bound.
pub fn exhaustive_alphabet_check(exec: Execution) -> Result<AlphabetCheck, ExperimentError> {
    let start = Instant::now();
    let (m, n, k) = (2, 3, 2);
    let lefts = all_dfas(m, k);
    let rights = all_dfas(n, k);
    let pairs_total = (lefts.len() * rights.len()) as u64;
    let lefts: Vec<Dfa> = lefts.into_iter().filter(Dfa::is_minimal).collect();
    let rights: Vec<Dfa> = rights.into_iter().filter(Dfa::is_minimal).collect();
    let b_left = witnesses::make_binary_left(m)?;
    let b_right = witnesses::make_binary_right(n)?;

    let per_left = par::map(
        exec,
        &lefts,
        |left| -> Result<(u64, Option<u64>), OverlapError> {
            let mut best = 0;
            let mut witness = None;
            for right in &rights {
                let sc = crate::overlap_dfa(left, right)?.state_count() as u64;
                best = best.max(sc);
                if *left == b_left && *right == b_right {
                    witness = Some(sc);
                }
            }
            Ok((best, witness))
        },
    );
    let mut max = 0;
    let mut binary_witness = None;
    for cell in per_left {
        let (best, witness) = cell?;
        max = max.max(best);
        binary_witness = binary_witness.or(witness);
    }
    let general_bound = witnesses::general_upper_bound(m, n)?;
    if max >= general_bound {
        return Err(ExperimentError::BoundOnSmallAlphabet {
            m,
            n,
            alphabet: k,
            max,
            bound: general_bound,
        });
    }
    Ok(AlphabetCheck {
        m,
        n,
        alphabet_size: k,
        pairs_total,
        pairs_measured: (lefts.len() * rights.len()) as u64,
        max_state_complexity: max,
        general_bound,
        binary_witness,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceConfig {
    pub trials: usize,
    /// Each operand gets between 1 and `max_states` states.
    pub max_states: usize,
    pub alphabet: RangeInclusive<usize>,
    pub horizon: usize,
    pub seed: u64,
}

impl Default for ConformanceConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            max_states: 4,
            alphabet: 2..=3,
            horizon: 6,
            seed: 0,
        }
    }
}

/// A trial that disagreed, with both operands in the text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceFailure {
    pub trial: usize,
    pub left: String,
    pub right: String,
    pub reason: String,
}

impl fmt::Display for ConformanceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trial {}: {}", self.trial, self.reason)?;
        writeln!(f, "left:")?;
        write!(f, "{}", self.left)?;
        writeln!(f, "right:")?;
        write!(f, "{}", self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConformanceSummary {
    pub trials: usize,
    /// Words of the overlap found up to the horizon, summed over trials.
    pub words_compared: usize,
    /// Nonempty reachable subsets decomposed, summed over trials.
    pub subsets_decomposed: usize,
    /// Trials whose minimized left operand has at least 2 states, where the
    /// general bound applies.
    pub ceiling_checks: usize,
    pub failures: Vec<ConformanceFailure>,
}

impl ConformanceSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Uniform over total transition functions and nonempty final sets, with
/// initial state 0.
pub fn random_dfa<R: Rng>(rng: &mut R, states: usize, alphabet: usize) -> Dfa {
    let table = (0..states * alphabet)
        .map(|_| rng.gen_range(0..states))
        .collect();
    let mask = rng.gen_range(1..(1u64 << states));
    let finals: Vec<usize> = (0..states).filter(|q| mask >> q & 1 == 1).collect();
    Dfa::new(states, alphabet, table, 0, &finals).expect("in range")
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// The operand pair used by `trial`.
pub fn conformance_pair(config: &ConformanceConfig, trial: usize) -> (Dfa, Dfa) {
    let mut rng = trial_rng(config.seed, trial);
    let k = rng.gen_range(config.alphabet.clone());
    let m = rng.gen_range(1..=config.max_states);
    let n = rng.gen_range(1..=config.max_states);
    (random_dfa(&mut rng, m, k), random_dfa(&mut rng, n, k))
}

struct TrialOutcome {
    words: usize,
    subsets: usize,
    ceiling: bool,
}

fn run_trial(left: &Dfa, right: &Dfa, horizon: usize) -> Result<TrialOutcome, String> {
    let built = crate::overlap_dfa(left, right).map_err(|e| e.to_string())?;
    let expected = brute_force_overlap_with(
        &enumerate_language(left, horizon),
        &enumerate_language(right, horizon),
        horizon,
        Execution::Sequential,
    )
    .map_err(|e| e.to_string())?;
    let got = enumerate_language(&built, horizon);
    if got.words != expected.words {
        let missing = expected.words.difference(&got.words).next();
        let extra = got.words.difference(&expected.words).next();
        return Err(match (missing, extra) {
            (Some(w), _) => format!("oracle word {w} not accepted by the construction"),
            (None, Some(w)) => format!("construction accepts {w}, which the oracle rejects"),
            (None, None) => unreachable!("sets differ"),
        });
    }

    let report = overlap::find_subset_violation(left, right).map_err(|e| e.to_string())?;
    if let Some(v) = report {
        return Err(v.to_string());
    }
    let subsets = overlap::check_reachable_subsets(left, right)
        .map_err(|e| e.to_string())?
        .decomposed;

    let m = left.state_complexity();
    let n = right.state_complexity();
    let ceiling = m >= 2;
    if ceiling {
        let bound = witnesses::general_upper_bound(m, n).map_err(|e| e.to_string())?;
        let sc = built.state_count() as u64;
        if sc > bound {
            return Err(format!(
                "state complexity {sc} exceeds the bound {bound} for (m, n) = ({m}, {n})"
            ));
        }
    }
    Ok(TrialOutcome {
        words: expected.len(),
        subsets,
        ceiling,
    })
}

/// Random operand pairs checked against the oracle up to `horizon`, for the
/// subset form of every reachable subset, and against the general bound.
/// Trials draw from independent streams of one seed, so the summary does
/// not depend on the execution mode.
pub fn random_conformance(
    config: &ConformanceConfig,
    exec: Execution,
) -> Result<ConformanceSummary, ExperimentError> {
    if config.horizon == 0 {
        return Err(ExperimentError::Precondition("horizon must be at least 1"));
    }
    if config.max_states == 0 || config.max_states > 16 {
        return Err(ExperimentError::Precondition(
            "max_states must be between 1 and 16",
        ));
    }
    if config.alphabet.is_empty() || *config.alphabet.start() == 0 {
        return Err(ExperimentError::Precondition(
            "alphabet sizes must be a nonempty range of positive integers",
        ));
    }
    let trials: Vec<usize> = (0..config.trials).collect();
    let outcomes = par::map(exec, &trials, |&t| {
        let (left, right) = conformance_pair(config, t);
        run_trial(&left, &right, config.horizon).map_err(|reason| ConformanceFailure {
            trial: t,
            left: render_dfa(&left),
            right: render_dfa(&right),
            reason,
        })
    });
    let mut summary = ConformanceSummary {
        trials: config.trials,
        ..Default::default()
    };
    for outcome in outcomes {
        match outcome {
            Ok(o) => {
                summary.words_compared += o.words;
                summary.subsets_decomposed += o.subsets;
                summary.ceiling_checks += usize::from(o.ceiling);
            }
            Err(f) => summary.failures.push(f),
        }
    }
    Ok(summary)
}

pub const CSV_HEADER: &str = "family,m,n,measured,predicted,relation,elapsed_ms";

/// One header line and one row per record.
pub fn render_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.3}",
            r.family,
            r.m,
            r.n,
            r.measured,
            r.predicted,
            r.relation,
            r.elapsed.as_secs_f64() * 1000.0
        );
    }
    out
}
