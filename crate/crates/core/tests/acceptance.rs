//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Time limits are checked alongside the results.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use overlapsc::experiments::{self, ConformanceConfig, ExperimentError, ExperimentRecord, Family};
use overlapsc::format::{parse_dfa, render_dfa};
use overlapsc::witnesses::{self, WitnessKind};
use overlapsc::{overlap_dfa, Dfa, Execution};

const SEED: u64 = 20_160_610;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let ok = outcome.ok && in_time;
    let timing = format!("{:.2}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs());
    println!(
        "{} criterion {id}: {name}: {}{} ({timing})",
        if ok { "PASS" } else { "FAIL" },
        outcome.detail,
        if in_time { "" } else { "; over time limit" },
    );
    ok
}

fn list(records: &[ExperimentRecord]) -> String {
    records
        .iter()
        .map(|r| format!("({},{})={}", r.m(), r.n(), r.measured()))
        .collect::<Vec<_>>()
        .join(" ")
}

fn general() -> Outcome {
    match experiments::run_general_grid(2..=4, 3..=4, Execution::default()) {
        Ok(records) if records.len() == 6 => pass(format!("6 exact equalities {}", list(&records))),
        Ok(records) => fail(format!("expected 6 records, got {}", records.len())),
        Err(e) => fail(e.to_string()),
    }
}

fn two_state_regression() -> Outcome {
    let left = Dfa::new(2, 2, vec![1, 0, 0, 1], 0, &[1]).unwrap();
    let right = Dfa::new(2, 2, vec![1, 0, 1, 0], 0, &[1]).unwrap();
    let result = match overlap_dfa(&left, &right) {
        Ok(d) => d,
        Err(e) => return fail(e.to_string()),
    };
    match (result.state_count(), result.equivalent(&right)) {
        (2, Ok(true)) => pass("2 states, equivalent to the right operand"),
        (count, eq) => fail(format!(
            "{count} states, equivalent to the right operand: {eq:?}"
        )),
    }
}

fn unary() -> Outcome {
    match experiments::run_unary_grid(1..=6, 1..=6, Execution::default()) {
        Ok(records) => pass(format!("{} records hold", records.len())),
        Err(ExperimentError::Violations {
            violations,
            records,
        }) => {
            let cells: Vec<String> = violations
                .iter()
                .map(|v| {
                    format!(
                        "{}({},{}) measured {} predicted {}",
                        v.family, v.m, v.n, v.measured, v.predicted
                    )
                })
                .collect();
            let infinite_ok = violations.iter().all(|v| v.family != Family::UnaryInfinite);
            fail(format!(
                "{} of {} records violated (infinite case {}): {}",
                violations.len(),
                violations.len() + records.len(),
                if infinite_ok {
                    "all hold"
                } else {
                    "has violations"
                },
                cells.join(", ")
            ))
        }
        Err(e) => fail(e.to_string()),
    }
}

fn binary() -> Outcome {
    match experiments::run_binary_grid(2..=3, 3..=5, Execution::default()) {
        Ok(records) if records.len() == 6 => pass(format!(
            "6 cells within [lower, general] {}",
            list(&records)
        )),
        Ok(records) => fail(format!("expected 6 records, got {}", records.len())),
        Err(e) => fail(e.to_string()),
    }
}

fn alphabet() -> Outcome {
    match experiments::exhaustive_alphabet_check(Execution::default()) {
        Ok(check) => {
            let witness_ok = check.binary_witness.is_some_and(|sc| sc >= 6);
            let detail = format!(
                "{} pairs, {} with exact operands, max {} < {}, B_2/B'_3 gives {:?}",
                check.pairs_total,
                check.pairs_measured,
                check.max_state_complexity,
                check.general_bound,
                check.binary_witness
            );
            if check.pairs_total == 373_248 && witness_ok {
                pass(detail)
            } else {
                fail(detail)
            }
        }
        Err(e) => fail(e.to_string()),
    }
}

fn conformance_config() -> ConformanceConfig {
    ConformanceConfig {
        trials: 200,
        max_states: 4,
        alphabet: 2..=3,
        horizon: 6,
        seed: SEED,
    }
}

fn conformance() -> Outcome {
    match experiments::random_conformance(&conformance_config(), Execution::default()) {
        Ok(s) if s.passed() => pass(format!(
            "{} trials, {} words compared, {} subsets decomposed, {} ceiling checks",
            s.trials, s.words_compared, s.subsets_decomposed, s.ceiling_checks
        )),
        Ok(s) => fail(format!(
            "{} failing trials, first:\n{}",
            s.failures.len(),
            s.failures[0]
        )),
        Err(e) => fail(e.to_string()),
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn identities() -> Outcome {
    for n in 1..=12u64 {
        let lhs: u64 = (1..=n).map(|k| binomial(n - 1, k - 1) << k).sum();
        if lhs != 2 * 3u64.pow(n as u32 - 1) {
            return fail(format!("first identity fails at n = {n}"));
        }
        let lhs: u64 = (1..=n).map(|k| binomial(n, k) << k).sum();
        if lhs != 3u64.pow(n as u32) - 1 {
            return fail(format!("second identity fails at n = {n}"));
        }
    }
    for m in 2..=8 {
        for n in 1..=8 {
            let at_one = witnesses::distinguishable_count_bound(m, n, 1).unwrap();
            if at_one != witnesses::general_upper_bound(m, n).unwrap() {
                return fail(format!(
                    "|F| = 1 count differs from the general bound at ({m},{n})"
                ));
            }
            for f in 2..=m {
                if witnesses::distinguishable_count_bound(m, n, f).unwrap() >= at_one {
                    return fail(format!("|F| = {f} not below |F| = 1 at ({m},{n})"));
                }
            }
        }
    }
    pass("both identities for n <= 12, |F| = 1 strictly maximal for m, n <= 8")
}

fn generator_outputs() -> Vec<Dfa> {
    let mut out = Vec::new();
    for kind in WitnessKind::ALL {
        let params: Vec<Vec<usize>> = match kind.params().len() {
            1 => (0..=6).map(|a| vec![a]).collect(),
            _ => (1..=5)
                .flat_map(|a| (1..=5).map(move |b| vec![a, b]))
                .collect(),
        };
        for p in params {
            if let Ok(d) = kind.with_params(&p).and_then(|w| w.build()) {
                out.push(d);
            }
        }
    }
    out
}

fn deterministic_run() -> String {
    let config = ConformanceConfig {
        trials: 60,
        ..conformance_config()
    };
    let mut out = String::new();
    for t in 0..config.trials {
        let (left, right) = experiments::conformance_pair(&config, t);
        out.push_str(&render_dfa(&overlap_dfa(&left, &right).unwrap()));
    }
    let summary = experiments::random_conformance(&config, Execution::default()).unwrap();
    out.push_str(&format!("{summary:?}"));
    out
}

fn round_trip() -> Outcome {
    let outputs = generator_outputs();
    for d in &outputs {
        match parse_dfa(&render_dfa(d)) {
            Ok(back) if back == *d => {}
            Ok(_) => return fail(format!("round trip changed\n{}", render_dfa(d))),
            Err(e) => return fail(format!("round trip failed to parse: {e}")),
        }
    }
    let first = deterministic_run();
    let second = deterministic_run();
    if first != second {
        return fail("two runs with the same seed differ");
    }
    pass(format!(
        "{} generator outputs round-trip, {} identical bytes across two runs",
        outputs.len(),
        first.len()
    ))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run(1, "general tightness", secs(10), general),
        run(2, "two-state regression", secs(1), two_state_regression),
        run(3, "unary tightness", secs(5), unary),
        run(4, "binary lower bound", secs(10), binary),
        run(5, "alphabet necessity at (2,3)", secs(300), alphabet),
        run(6, "oracle conformance", secs(30), conformance),
        run(7, "formula identities", secs(1), identities),
        run(8, "serialization and determinism", secs(5), round_trip),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
