//! Witness automata and closed-form bounds for overlap assembly.
//!
//! Left-operand states are `0..m` (initial `0`), right-operand states are
//! `0..n` and written `0', 1', ...` in comments (initial `0'`).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automata::{Dfa, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{family}: {requirement} (got {param} = {value})")]
    OutOfRange {
        family: &'static str,
        param: &'static str,
        value: usize,
        requirement: &'static str,
    },
    #[error("{formula}: {requirement} (got m = {m}, n = {n}, f = {f})")]
    BoundDomain {
        formula: &'static str,
        m: usize,
        n: usize,
        f: usize,
        requirement: &'static str,
    },
    #[error("{formula} overflows u64 at m = {m}, n = {n}")]
    Overflow {
        formula: &'static str,
        m: usize,
        n: usize,
    },
    #[error("unknown witness kind `{0}`")]
    UnknownKind(String),
}

fn require(
    ok: bool,
    family: &'static str,
    param: &'static str,
    value: usize,
    requirement: &'static str,
) -> Result<(), WitnessError> {
    if ok {
        Ok(())
    } else {
        Err(WitnessError::OutOfRange {
            family,
            param,
            value,
            requirement,
        })
    }
}

/// `W_m` over `n` letters: `a_1` is the cycle `(0, 1, ..., m-1)`, every
/// other letter is the identity, and `F = {0}`.
pub fn make_general_left(m: usize, n: usize) -> Result<Dfa, WitnessError> {
    require(
        m >= 2,
        "general-left",
        "m",
        m,
        "the general bound is stated for m >= 2",
    )?;
    require(
        n >= 3,
        "general-left",
        "n",
        n,
        "the general bound is met for n >= 3",
    )?;
    Ok(
        Dfa::from_fn(m, n, 0, &[0], |q, a| if a == 1 { (q + 1) % m } else { q })
            .expect("valid witness"),
    )
}

/// Image of `p'` under `a_i` in `W'_n` for `i >= 1`: the cycle
/// `(1', ..., (i-1)', 0', i', ..., (n-1)')`.
fn general_right_cycle_step(n: usize, i: usize, p: StateId) -> StateId {
    let mut cycle: Vec<StateId> = (1..i).collect();
    cycle.push(0);
    cycle.extend(i..n);
    let pos = cycle
        .iter()
        .position(|&x| x == p)
        .expect("state on the cycle");
    cycle[(pos + 1) % n]
}

/// `W'_n` over `n` letters: `a_0` resets every state to `0'`, `a_i` for
/// `i >= 1` is the cycle `(1', ..., (i-1)', 0', i', ..., (n-1)')`, and
/// `F = {(n-1)'}`.
pub fn make_general_right(n: usize) -> Result<Dfa, WitnessError> {
    require(
        n >= 3,
        "general-right",
        "n",
        n,
        "the general bound is met for n >= 3",
    )?;
    Ok(Dfa::from_fn(n, n, 0, &[n - 1], |p, a| {
        if a == 0 {
            0
        } else {
            general_right_cycle_step(n, a, p)
        }
    })
    .expect("valid witness"))
}

/// `B_m` over `{a_0, a_1}`: `a_0` is the identity, `a_1` the cycle
/// `(0, ..., m-1)`, `F = {0}`.
pub fn make_binary_left(m: usize) -> Result<Dfa, WitnessError> {
    require(
        m >= 2,
        "binary-left",
        "m",
        m,
        "the binary lower bound is stated for m >= 2",
    )?;
    Ok(
        Dfa::from_fn(m, 2, 0, &[0], |q, a| if a == 1 { (q + 1) % m } else { q })
            .expect("valid witness"),
    )
}

/// `B'_n` over `{a_0, a_1}`: `a_0` fixes `0'` and cycles `(1', ..., (n-1)')`,
/// `a_1` cycles all states, `F = {(n-1)'}`.
pub fn make_binary_right(n: usize) -> Result<Dfa, WitnessError> {
    require(
        n >= 3,
        "binary-right",
        "n",
        n,
        "the binary lower bound is proven for n >= 3",
    )?;
    Ok(Dfa::from_fn(n, 2, 0, &[n - 1], |p, a| match (a, p) {
        (0, 0) => 0,
        (0, p) if p == n - 1 => 1,
        (0, p) => p + 1,
        (_, p) => (p + 1) % n,
    })
    .expect("valid witness"))
}

/// Unary residue automata: the left accepts `a^k` with `k ≡ n-1 (mod m)`,
/// the right `a^k` with `k ≡ m-1 (mod n)`. Both are pure cycles.
pub fn make_unary_witnesses(m: usize, n: usize) -> Result<(Dfa, Dfa), WitnessError> {
    require(m >= 1, "unary", "m", m, "state complexities are at least 1")?;
    require(n >= 1, "unary", "n", n, "state complexities are at least 1")?;
    let cycle = |size: usize, fin: usize| {
        Dfa::from_fn(size, 1, 0, &[fin % size], |q, _| (q + 1) % size).expect("valid witness")
    };
    Ok((cycle(m, n - 1), cycle(n, m - 1)))
}

/// Minimal complete unary DFA for `{a^longest}`: a path of `longest + 1`
/// states followed by a sink.
pub fn make_unary_finite(longest: usize) -> Dfa {
    let sink = longest + 1;
    Dfa::from_fn(longest + 2, 1, 0, &[longest], |q, _| (q + 1).min(sink)).expect("valid witness")
}

/// A parameterized witness automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessFamily {
    GeneralLeft { m: usize, n: usize },
    GeneralRight { n: usize },
    BinaryLeft { m: usize },
    BinaryRight { n: usize },
    UnaryLeft { m: usize, n: usize },
    UnaryRight { m: usize, n: usize },
    UnaryFinite { longest: usize },
}

/// The kind of a [`WitnessFamily`] without its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    GeneralLeft,
    GeneralRight,
    BinaryLeft,
    BinaryRight,
    UnaryLeft,
    UnaryRight,
    UnaryFinite,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 7] = [
        WitnessKind::GeneralLeft,
        WitnessKind::GeneralRight,
        WitnessKind::BinaryLeft,
        WitnessKind::BinaryRight,
        WitnessKind::UnaryLeft,
        WitnessKind::UnaryRight,
        WitnessKind::UnaryFinite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::GeneralLeft => "general-left",
            WitnessKind::GeneralRight => "general-right",
            WitnessKind::BinaryLeft => "binary-left",
            WitnessKind::BinaryRight => "binary-right",
            WitnessKind::UnaryLeft => "unary-left",
            WitnessKind::UnaryRight => "unary-right",
            WitnessKind::UnaryFinite => "unary-finite",
        }
    }

    /// Names of the numeric parameters, in command-line order.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            WitnessKind::GeneralLeft | WitnessKind::UnaryLeft | WitnessKind::UnaryRight => {
                &["m", "n"]
            }
            WitnessKind::GeneralRight | WitnessKind::BinaryRight => &["n"],
            WitnessKind::BinaryLeft => &["m"],
            WitnessKind::UnaryFinite => &["longest"],
        }
    }

    /// Pairs this kind with positional parameters.
    pub fn with_params(self, values: &[usize]) -> Result<WitnessFamily, WitnessError> {
        let names = self.params();
        if values.len() != names.len() {
            return Err(WitnessError::OutOfRange {
                family: self.name(),
                param: "parameter count",
                value: values.len(),
                requirement: match names.len() {
                    1 => "expects exactly one parameter",
                    _ => "expects exactly two parameters",
                },
            });
        }
        Ok(match self {
            WitnessKind::GeneralLeft => WitnessFamily::GeneralLeft {
                m: values[0],
                n: values[1],
            },
            WitnessKind::GeneralRight => WitnessFamily::GeneralRight { n: values[0] },
            WitnessKind::BinaryLeft => WitnessFamily::BinaryLeft { m: values[0] },
            WitnessKind::BinaryRight => WitnessFamily::BinaryRight { n: values[0] },
            WitnessKind::UnaryLeft => WitnessFamily::UnaryLeft {
                m: values[0],
                n: values[1],
            },
            WitnessKind::UnaryRight => WitnessFamily::UnaryRight {
                m: values[0],
                n: values[1],
            },
            WitnessKind::UnaryFinite => WitnessFamily::UnaryFinite { longest: values[0] },
        })
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessKind {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WitnessKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| WitnessError::UnknownKind(s.to_owned()))
    }
}

impl WitnessFamily {
    pub fn kind(&self) -> WitnessKind {
        match self {
            WitnessFamily::GeneralLeft { .. } => WitnessKind::GeneralLeft,
            WitnessFamily::GeneralRight { .. } => WitnessKind::GeneralRight,
            WitnessFamily::BinaryLeft { .. } => WitnessKind::BinaryLeft,
            WitnessFamily::BinaryRight { .. } => WitnessKind::BinaryRight,
            WitnessFamily::UnaryLeft { .. } => WitnessKind::UnaryLeft,
            WitnessFamily::UnaryRight { .. } => WitnessKind::UnaryRight,
            WitnessFamily::UnaryFinite { .. } => WitnessKind::UnaryFinite,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match *self {
            WitnessFamily::GeneralLeft { n, .. } | WitnessFamily::GeneralRight { n } => n,
            WitnessFamily::BinaryLeft { .. } | WitnessFamily::BinaryRight { .. } => 2,
            _ => 1,
        }
    }

    /// The state complexity the generated automaton is built to have.
    pub fn declared_states(&self) -> usize {
        match *self {
            WitnessFamily::GeneralLeft { m, .. }
            | WitnessFamily::BinaryLeft { m }
            | WitnessFamily::UnaryLeft { m, .. } => m,
            WitnessFamily::GeneralRight { n }
            | WitnessFamily::BinaryRight { n }
            | WitnessFamily::UnaryRight { n, .. } => n,
            WitnessFamily::UnaryFinite { longest } => longest + 2,
        }
    }

    pub fn build(&self) -> Result<Dfa, WitnessError> {
        match *self {
            WitnessFamily::GeneralLeft { m, n } => make_general_left(m, n),
            WitnessFamily::GeneralRight { n } => make_general_right(n),
            WitnessFamily::BinaryLeft { m } => make_binary_left(m),
            WitnessFamily::BinaryRight { n } => make_binary_right(n),
            WitnessFamily::UnaryLeft { m, n } => make_unary_witnesses(m, n).map(|p| p.0),
            WitnessFamily::UnaryRight { m, n } => make_unary_witnesses(m, n).map(|p| p.1),
            WitnessFamily::UnaryFinite { longest } => Ok(make_unary_finite(longest)),
        }
    }
}

fn pow(
    base: u64,
    exp: usize,
    formula: &'static str,
    m: usize,
    n: usize,
) -> Result<u64, WitnessError> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or(WitnessError::Overflow { formula, m, n })
}

fn checked(
    value: Option<u64>,
    formula: &'static str,
    m: usize,
    n: usize,
) -> Result<u64, WitnessError> {
    value.ok_or(WitnessError::Overflow { formula, m, n })
}

/// `2(m-1)·3^(n-1) + 2^n`, the largest possible state complexity of an
/// overlap assembly of languages with state complexities `m` and `n`.
pub fn general_upper_bound(m: usize, n: usize) -> Result<u64, WitnessError> {
    const F: &str = "general upper bound";
    if m < 2 || n < 1 {
        return Err(WitnessError::BoundDomain {
            formula: F,
            m,
            n,
            f: 0,
            requirement: "requires m >= 2 and n >= 1",
        });
    }
    let three = pow(3, n - 1, F, m, n)?;
    let two = pow(2, n, F, m, n)?;
    checked(
        (2 * (m as u64 - 1))
            .checked_mul(three)
            .and_then(|x| x.checked_add(two)),
        F,
        m,
        n,
    )
}

fn check_final_count(
    formula: &'static str,
    m: usize,
    n: usize,
    f: usize,
) -> Result<(), WitnessError> {
    if n >= 1 && 1 <= f && f <= m {
        Ok(())
    } else {
        Err(WitnessError::BoundDomain {
            formula,
            m,
            n,
            f,
            requirement: "requires n >= 1 and 1 <= f <= m",
        })
    }
}

/// Count of potentially reachable subsets with `f` final left states:
/// `(m-f)(3^n - 1) + f(2^n - 1) + 1`.
pub fn reachable_count_bound(m: usize, n: usize, f: usize) -> Result<u64, WitnessError> {
    const F: &str = "reachable subset count";
    check_final_count(F, m, n, f)?;
    let non_final = checked(
        ((m - f) as u64).checked_mul(pow(3, n, F, m, n)? - 1),
        F,
        m,
        n,
    )?;
    let final_part = checked((f as u64).checked_mul(pow(2, n, F, m, n)? - 1), F, m, n)?;
    checked(
        non_final
            .checked_add(final_part)
            .and_then(|x| x.checked_add(1)),
        F,
        m,
        n,
    )
}

/// Count of potentially distinguishable subsets with `f` final left states:
/// `(m-f)·2·3^(n-1) + f(2^n - 1) + 1`.
pub fn distinguishable_count_bound(m: usize, n: usize, f: usize) -> Result<u64, WitnessError> {
    const F: &str = "distinguishable subset count";
    check_final_count(F, m, n, f)?;
    let per_non_final = checked(pow(3, n - 1, F, m, n)?.checked_mul(2), F, m, n)?;
    let non_final = checked(((m - f) as u64).checked_mul(per_non_final), F, m, n)?;
    let final_part = checked((f as u64).checked_mul(pow(2, n, F, m, n)? - 1), F, m, n)?;
    checked(
        non_final
            .checked_add(final_part)
            .and_then(|x| x.checked_add(1)),
        F,
        m,
        n,
    )
}

/// `m(2^(n-1) - 2) + 2`, the lower bound reached by the binary witnesses.
pub fn binary_lower_bound(m: usize, n: usize) -> Result<u64, WitnessError> {
    const F: &str = "binary lower bound";
    if m < 2 || n < 3 {
        return Err(WitnessError::BoundDomain {
            formula: F,
            m,
            n,
            f: 0,
            requirement: "requires m >= 2 and n >= 3",
        });
    }
    let inner = pow(2, n - 1, F, m, n)? - 2;
    checked(
        (m as u64).checked_mul(inner).and_then(|x| x.checked_add(2)),
        F,
        m,
        n,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_left_matches_the_three_by_four_drawing() {
        let w = make_general_left(3, 4).unwrap();
        assert_eq!(w.alphabet_size(), 4);
        assert_eq!(w.finals().collect::<Vec<_>>(), [0]);
        for q in 0..3 {
            assert_eq!(w.row(q), [q, (q + 1) % 3, q, q]);
        }
    }

    #[test]
    fn general_right_matches_the_four_state_drawing() {
        let w = make_general_right(4).unwrap();
        assert_eq!(w.finals().collect::<Vec<_>>(), [3]);
        let column = |a: usize| (0..4).map(|p| w.next(p, a)).collect::<Vec<_>>();
        assert_eq!(column(0), [0, 0, 0, 0]);
        // a_1: 0'→1'→2'→3'→0'
        assert_eq!(column(1), [1, 2, 3, 0]);
        // a_2: 3'→1', 1'→0', 0'→2', 2'→3'
        assert_eq!(column(2), [2, 0, 3, 1]);
        // a_3: 3'→1', 1'→2', 2'→0', 0'→3'
        assert_eq!(column(3), [3, 2, 0, 1]);
    }

    #[test]
    fn binary_witnesses() {
        let b2 = make_binary_left(2).unwrap();
        assert_eq!(b2.row(0), [0, 1]);
        assert_eq!(b2.row(1), [1, 0]);
        let b4 = make_binary_right(4).unwrap();
        let column = |a: usize| (0..4).map(|p| b4.next(p, a)).collect::<Vec<_>>();
        assert_eq!(column(0), [0, 2, 3, 1]);
        assert_eq!(column(1), [1, 2, 3, 0]);
        assert_eq!(b4.finals().collect::<Vec<_>>(), [3]);
    }

    #[test]
    fn generators_are_minimal_with_permutation_and_identity_letters() {
        for m in 2..=4 {
            for n in 3..=5 {
                let w = make_general_left(m, n).unwrap();
                assert_eq!(w.state_complexity(), m);
                assert!(w.is_permutation(1));
                for a in (0..n).filter(|&a| a != 1) {
                    assert!(w.is_identity(a));
                }
            }
            let b = make_binary_left(m).unwrap();
            assert_eq!(b.state_complexity(), m);
            assert!(b.is_identity(0) && b.is_permutation(1));
        }
        for n in 3..=5 {
            let w = make_general_right(n).unwrap();
            assert_eq!(w.state_complexity(), n);
            assert!((1..n).all(|a| w.is_permutation(a)));
            let b = make_binary_right(n).unwrap();
            assert_eq!(b.state_complexity(), n);
            assert!(b.is_permutation(0) && b.is_permutation(1));
            assert_eq!(b.next(0, 0), 0);
        }
    }

    #[test]
    fn identity_letter_keeps_acceptance() {
        let w = make_general_left(3, 4).unwrap();
        for k in 0..=5 {
            assert_eq!(w.accepts(&vec![0; k]), Ok(true));
        }
    }

    #[test]
    fn unary_witnesses() {
        let (l, r) = make_unary_witnesses(3, 4).unwrap();
        // n - 1 = 3 ≡ 0 (mod 3); m - 1 = 2 (mod 4).
        for k in 0..12 {
            assert_eq!(l.accepts(&vec![0; k]), Ok(k % 3 == 0));
            assert_eq!(r.accepts(&vec![0; k]), Ok(k % 4 == 2));
        }
        for m in 1..=6 {
            for n in 1..=6 {
                let (l, r) = make_unary_witnesses(m, n).unwrap();
                assert_eq!((l.state_complexity(), r.state_complexity()), (m, n));
            }
        }
        assert!(make_unary_witnesses(0, 1).is_err());
    }

    #[test]
    fn unary_finite() {
        let eps = make_unary_finite(0);
        assert_eq!(eps.accepts(&[]), Ok(true));
        assert_eq!(eps.accepts(&[0]), Ok(false));
        assert_eq!(eps.state_complexity(), 2);
        let aa = make_unary_finite(2);
        assert_eq!(aa.state_complexity(), 4);
        for k in 0..6 {
            assert_eq!(aa.accepts(&vec![0; k]), Ok(k == 2));
        }
    }

    #[test]
    fn range_errors() {
        assert!(make_general_left(1, 3).is_err());
        assert!(make_general_left(2, 2).is_err());
        let err = make_general_right(2).unwrap_err();
        assert!(err.to_string().contains("n >= 3"), "{err}");
        assert!(make_binary_left(1).is_err());
        assert!(make_binary_right(2).is_err());
    }

    #[test]
    fn bound_arithmetic() {
        assert_eq!(general_upper_bound(2, 3), Ok(26));
        assert_eq!(general_upper_bound(3, 4), Ok(124));
        assert_eq!(general_upper_bound(2, 1), Ok(4));
        assert!(general_upper_bound(1, 3).is_err());
        assert!(general_upper_bound(2, 0).is_err());

        assert_eq!(reachable_count_bound(2, 3, 1), Ok(34));
        assert_eq!(distinguishable_count_bound(2, 3, 1), Ok(26));
        for m in 1..=5 {
            for n in 1..=5 {
                let all_final = m as u64 * ((1 << n) - 1) + 1;
                assert_eq!(reachable_count_bound(m, n, m), Ok(all_final));
            }
        }
        assert!(reachable_count_bound(3, 3, 0).is_err());
        assert!(distinguishable_count_bound(3, 3, 4).is_err());

        assert_eq!(binary_lower_bound(2, 3), Ok(6));
        assert_eq!(binary_lower_bound(2, 4), Ok(14));
        assert_eq!(binary_lower_bound(3, 5), Ok(44));
        assert_eq!(binary_lower_bound(3, 4), Ok(20));
        assert!(binary_lower_bound(2, 2).is_err());

        assert!(matches!(
            general_upper_bound(2, 60),
            Err(WitnessError::Overflow { .. })
        ));
    }

    #[test]
    fn kinds_parse_and_build() {
        for kind in WitnessKind::ALL {
            assert_eq!(kind.name().parse::<WitnessKind>(), Ok(kind));
        }
        assert!("nope".parse::<WitnessKind>().is_err());
        let fam = WitnessKind::GeneralLeft.with_params(&[3, 4]).unwrap();
        assert_eq!(fam.alphabet_size(), 4);
        assert_eq!(fam.build().unwrap(), make_general_left(3, 4).unwrap());
        assert!(WitnessKind::BinaryRight.with_params(&[3, 4]).is_err());
        let fam = WitnessKind::UnaryFinite.with_params(&[3]).unwrap();
        assert_eq!(fam.declared_states(), 5);
    }
}
