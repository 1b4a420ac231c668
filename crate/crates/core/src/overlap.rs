//! Overlap assembly of words and of DFA languages.
//!
//! For languages the result is recognized by an ε-NFA over pair states
//! `(Q ∪ {t}) × (Q' ∪ {s'})`:
//!
//! 1. `(q, s') -a-> (δ(q,a), s')` reads the prefix `u`;
//! 2. `(q, s') -a-> (δ(q,a), δ'(0',a))` reads the first letter of the overlap;
//! 3. `(q, p') -a-> (δ(q,a), δ'(p',a))` reads the rest of the overlap;
//! 4. `(f, p') -ε-> (t, p')` for final `f` ends the left word;
//! 5. `(t, p') -a-> (t, δ'(p',a))` reads the suffix `w`.
//!
//! The start state is `(0, s')` and the final states are `(t, f')`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::automata::{
    AutomatonError, Dfa, EpsilonNfa, Left, PairState, Right, StateId, StateSet, Symbol, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OverlapError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("subset is not of the selector/core/subcore form: {0}")]
    Decomposition(#[from] DecompositionError),
    #[error("merge check needs a non-final selector without (q,0'): {0}")]
    Precondition(&'static str),
}

/// Ways a determinization subset can fail the selector/core/subcore form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("the empty subset is the sink and has no decomposition")]
    EmptySubset,
    #[error("no (q,s') pair: the subset has no selector")]
    NoSelector,
    #[error("two (q,s') pairs with q = {first} and q = {second}")]
    SeveralSelectors { first: StateId, second: StateId },
    #[error("pair with left state {other} next to selector {selector}")]
    MixedLeftStates { selector: StateId, other: StateId },
    #[error("subcore state {state}' is not in S'")]
    SubcoreOutsideCore { state: StateId },
    #[error("selector {selector} is final but the subcore differs from S'")]
    FinalSelectorSubcore { selector: StateId },
    #[error("S' is empty but the subset is not the initial subset")]
    EmptyCoreOffInitial { selector: StateId },
    #[error("pair {pair} is out of range for the operands")]
    OutOfRange { pair: PairState },
}

/// The selector / core / subcore view of a reachable subset
/// `{(q,s')} ∪ ({q} × S') ∪ ({t} × T')`, where `0'` is the right operand's
/// initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetDecomposition {
    /// The unique left state `q`.
    pub selector: StateId,
    /// `S' \ {0'}`.
    pub core: BTreeSet<StateId>,
    /// `T'`.
    pub subcore: BTreeSet<StateId>,
    /// Whether `(q,0')` is in the subset.
    pub has_zero: bool,
}

impl SubsetDecomposition {
    /// `S'`, i.e. the core plus `0'` when present.
    pub fn right_states(&self, zero: StateId) -> BTreeSet<StateId> {
        let mut s = self.core.clone();
        if self.has_zero {
            s.insert(zero);
        }
        s
    }
}

/// All words `uvw` with `x = uv`, `y = vw` and `v` nonempty.
pub fn word_overlap(x: &[Symbol], y: &[Symbol]) -> BTreeSet<Word> {
    let longest = x.len().min(y.len());
    (1..=longest)
        .filter(|&k| x[x.len() - k..] == y[..k])
        .map(|k| {
            let mut z = Vec::with_capacity(x.len() + y.len() - k);
            z.extend_from_slice(x);
            z.extend_from_slice(&y[k..]);
            Word(z)
        })
        .collect()
}

/// Builds the ε-NFA recognizing `L(left) ⊙ L(right)`.
pub fn build_overlap_nfa(left: &Dfa, right: &Dfa) -> Result<EpsilonNfa, OverlapError> {
    if left.alphabet_size() != right.alphabet_size() {
        return Err(AutomatonError::AlphabetMismatch {
            left: left.alphabet_size(),
            right: right.alphabet_size(),
        }
        .into());
    }
    let k = left.alphabet_size();
    let (m, n) = (left.state_count(), right.state_count());
    let zero = right.initial();
    let mut nfa = EpsilonNfa::new(m, n, k)?;

    for q in 0..m {
        for a in 0..k {
            let qa = left.next(q, a);
            nfa.add_transition(PairState::pending(q), a, PairState::pending(qa))?;
            nfa.add_transition(
                PairState::pending(q),
                a,
                PairState::running(qa, right.next(zero, a)),
            )?;
            for p in 0..n {
                nfa.add_transition(
                    PairState::running(q, p),
                    a,
                    PairState::running(qa, right.next(p, a)),
                )?;
            }
        }
    }
    for f in left.finals() {
        for p in 0..n {
            nfa.add_epsilon(PairState::running(f, p), PairState::finished(p))?;
        }
    }
    for p in 0..n {
        for a in 0..k {
            nfa.add_transition(
                PairState::finished(p),
                a,
                PairState::finished(right.next(p, a)),
            )?;
        }
    }
    nfa.set_initial(PairState::pending(left.initial()))?;
    for f in right.finals() {
        nfa.set_final(PairState::finished(f))?;
    }
    Ok(nfa)
}

/// Splits a reachable ε-closed subset into selector, core and subcore,
/// rejecting subsets that do not have that form.
pub fn decompose_subset(
    subset: &StateSet,
    left: &Dfa,
    right: &Dfa,
) -> Result<SubsetDecomposition, DecompositionError> {
    if subset.is_empty() {
        return Err(DecompositionError::EmptySubset);
    }
    let zero = right.initial();
    let mut selector: Option<StateId> = None;
    let mut running = Vec::new();
    let mut subcore = BTreeSet::new();

    for &pair in subset {
        let in_range = match (pair.left(), pair.right()) {
            (Left::State(q), _) if q >= left.state_count() => false,
            (_, Right::State(p)) if p >= right.state_count() => false,
            _ => true,
        };
        if !in_range {
            return Err(DecompositionError::OutOfRange { pair });
        }
        match (pair.left(), pair.right()) {
            (Left::State(q), Right::Pending) => match selector {
                None => selector = Some(q),
                Some(first) => {
                    return Err(DecompositionError::SeveralSelectors { first, second: q })
                }
            },
            (Left::State(q), Right::State(p)) => running.push((q, p)),
            (Left::Finished, Right::State(p)) => {
                subcore.insert(p);
            }
            (Left::Finished, Right::Pending) => unreachable!("(t, s') is not constructible"),
        }
    }

    let selector = selector.ok_or(DecompositionError::NoSelector)?;
    let mut s_prime = BTreeSet::new();
    for (q, p) in running {
        if q != selector {
            return Err(DecompositionError::MixedLeftStates { selector, other: q });
        }
        s_prime.insert(p);
    }
    if let Some(&state) = subcore.difference(&s_prime).next() {
        return Err(DecompositionError::SubcoreOutsideCore { state });
    }
    if left.is_final(selector) && subcore != s_prime {
        return Err(DecompositionError::FinalSelectorSubcore { selector });
    }
    if s_prime.is_empty() && selector != left.initial() {
        return Err(DecompositionError::EmptyCoreOffInitial { selector });
    }

    let has_zero = s_prime.remove(&zero);
    Ok(SubsetDecomposition {
        selector,
        core: s_prime,
        subcore,
        has_zero,
    })
}

/// Checks that the determinized construction cannot tell `subset` apart from
/// `subset ∪ {(q,0')}`, where `q` is a non-final selector and `(q,0')` is
/// absent from `subset`.
pub fn merged_pair_equivalent(
    left: &Dfa,
    right: &Dfa,
    subset: &StateSet,
) -> Result<bool, OverlapError> {
    let parts = decompose_subset(subset, left, right)?;
    if left.is_final(parts.selector) {
        return Err(OverlapError::Precondition("selector is final"));
    }
    if parts.has_zero {
        return Err(OverlapError::Precondition("(q,0') already present"));
    }
    let nfa = build_overlap_nfa(left, right)?;
    let mut merged = subset.clone();
    merged.insert(PairState::running(parts.selector, right.initial()));
    let plain = nfa.determinize_from(subset)?;
    let with_zero = nfa.determinize_from(&merged)?;
    Ok(plain.equivalent(&with_zero)?)
}

/// Summary of a subset-form check over one determinization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetReport {
    /// Reachable subsets, including the sink when reached.
    pub reachable: usize,
    /// Subsets that decomposed.
    pub decomposed: usize,
}

/// A reachable subset that failed to decompose.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("reachable subset {subset} violates the subset form: {reason}")]
pub struct SubsetViolation {
    pub subset: StateSet,
    pub reason: DecompositionError,
}

/// Determinizes the construction and decomposes every reachable subset
/// except the empty sink.
pub fn check_reachable_subsets(left: &Dfa, right: &Dfa) -> Result<SubsetReport, OverlapError> {
    let det = build_overlap_nfa(left, right)?.determinize_with_subsets();
    let mut decomposed = 0;
    for subset in det.subsets.iter().filter(|s| !s.is_empty()) {
        decompose_subset(subset, left, right)?;
        decomposed += 1;
    }
    Ok(SubsetReport {
        reachable: det.subsets.len(),
        decomposed,
    })
}

/// Like [`check_reachable_subsets`] but reports the offending subset.
pub fn find_subset_violation(
    left: &Dfa,
    right: &Dfa,
) -> Result<Option<SubsetViolation>, OverlapError> {
    let det = build_overlap_nfa(left, right)?.determinize_with_subsets();
    Ok(det.subsets.iter().filter(|s| !s.is_empty()).find_map(|s| {
        decompose_subset(s, left, right)
            .err()
            .map(|reason| SubsetViolation {
                subset: s.clone(),
                reason,
            })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Symbol = 0;
    const B: Symbol = 1;

    /// Odd number of a's.
    fn d2() -> Dfa {
        Dfa::new(2, 2, vec![1, 0, 0, 1], 0, &[1]).unwrap()
    }

    /// Ends in a.
    fn d2_prime() -> Dfa {
        Dfa::new(2, 2, vec![1, 0, 1, 0], 0, &[1]).unwrap()
    }

    fn set(pairs: &[PairState]) -> StateSet {
        pairs.iter().copied().collect()
    }

    fn w(s: &[Symbol]) -> Word {
        Word(s.to_vec())
    }

    #[test]
    fn word_overlap_examples() {
        assert_eq!(word_overlap(&[A], &[A]), BTreeSet::from([w(&[A])]));
        assert_eq!(
            word_overlap(&[A, B], &[B, A]),
            BTreeSet::from([w(&[A, B, A])])
        );
        assert!(word_overlap(&[0, 1], &[2, 3]).is_empty());
        assert!(word_overlap(&[], &[A]).is_empty());
        assert!(word_overlap(&[A], &[]).is_empty());
        // aa ⊙ aaa over a unary alphabet: v = a gives a^4, v = aa gives a^3.
        assert_eq!(
            word_overlap(&[A, A], &[A, A, A]),
            BTreeSet::from([w(&[A, A, A]), w(&[A, A, A, A])])
        );
    }

    #[test]
    fn two_state_construction_edges() {
        use PairState as P;
        let nfa = build_overlap_nfa(&d2(), &d2_prime()).unwrap();
        assert_eq!(nfa.state_count(), 8);
        assert_eq!(nfa.states().len(), 8);
        let labeled = BTreeSet::from([
            // top row
            (P::pending(0), A, P::pending(1)),
            (P::pending(1), A, P::pending(0)),
            (P::pending(0), B, P::pending(0)),
            (P::pending(1), B, P::pending(1)),
            // into the middle row
            (P::pending(0), B, P::running(0, 0)),
            (P::pending(0), A, P::running(1, 1)),
            (P::pending(1), A, P::running(0, 1)),
            (P::pending(1), B, P::running(1, 0)),
            // middle row
            (P::running(0, 0), A, P::running(1, 1)),
            (P::running(0, 0), B, P::running(0, 0)),
            (P::running(0, 1), A, P::running(1, 1)),
            (P::running(0, 1), B, P::running(0, 0)),
            (P::running(1, 1), B, P::running(1, 0)),
            (P::running(1, 1), A, P::running(0, 1)),
            (P::running(1, 0), A, P::running(0, 1)),
            (P::running(1, 0), B, P::running(1, 0)),
            // bottom row
            (P::finished(1), B, P::finished(0)),
            (P::finished(0), A, P::finished(1)),
            (P::finished(0), B, P::finished(0)),
            (P::finished(1), A, P::finished(1)),
        ]);
        assert_eq!(nfa.labeled_transitions(), labeled);
        assert_eq!(
            nfa.epsilon_transitions(),
            BTreeSet::from([
                (P::running(1, 1), P::finished(1)),
                (P::running(1, 0), P::finished(0)),
            ])
        );
        assert_eq!(nfa.initials(), set(&[P::pending(0)]));
        assert_eq!(nfa.finals(), set(&[P::finished(1)]));
    }

    #[test]
    fn closure_examples_on_two_state_pair() {
        let nfa = build_overlap_nfa(&d2(), &d2_prime()).unwrap();
        assert_eq!(
            nfa.epsilon_closure(&set(&[PairState::running(1, 1)]))
                .unwrap(),
            set(&[PairState::running(1, 1), PairState::finished(1)])
        );
        assert_eq!(
            nfa.epsilon_closure(&StateSet::new()).unwrap(),
            StateSet::new()
        );
        assert_eq!(
            nfa.epsilon_closure(&set(&[PairState::pending(0)])).unwrap(),
            set(&[PairState::pending(0)])
        );
    }

    #[test]
    fn two_state_pipeline_gives_right_operand() {
        let dfa = build_overlap_nfa(&d2(), &d2_prime()).unwrap().determinize();
        let min = dfa.minimize();
        assert_eq!(min.state_count(), 2);
        assert_eq!(min.equivalent(&d2_prime()), Ok(true));
        assert_eq!(min, d2_prime().minimize());
    }

    #[test]
    fn epsilon_nfa_invariants() {
        let nfa = build_overlap_nfa(&d2(), &d2_prime()).unwrap();
        for (from, to) in nfa.epsilon_transitions() {
            assert!(matches!(from.left(), Left::State(q) if d2().is_final(q)));
            assert_eq!(to.left(), Left::Finished);
            assert_eq!(from.right(), to.right());
        }
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let unary = Dfa::new(1, 1, vec![0], 0, &[0]).unwrap();
        assert!(matches!(
            build_overlap_nfa(&unary, &d2()),
            Err(OverlapError::Automaton(
                AutomatonError::AlphabetMismatch { .. }
            ))
        ));
    }

    #[test]
    fn empty_right_language_gives_empty_result() {
        let empty = Dfa::new(1, 2, vec![0, 0], 0, &[]).unwrap();
        let dfa = build_overlap_nfa(&d2(), &empty)
            .unwrap()
            .determinize()
            .minimize();
        assert_eq!(dfa.state_count(), 1);
        assert_eq!(dfa.final_count(), 0);
    }

    #[test]
    fn epsilon_only_operand_gives_empty_result() {
        let eps = Dfa::new(2, 1, vec![1, 1], 0, &[0]).unwrap();
        let all = Dfa::new(1, 1, vec![0], 0, &[0]).unwrap();
        for (l, r) in [(&eps, &all), (&all, &eps)] {
            let dfa = build_overlap_nfa(l, r).unwrap().determinize().minimize();
            assert_eq!(dfa.final_count(), 0);
        }
    }

    #[test]
    fn sigma_star_with_itself_gives_sigma_plus() {
        let all = Dfa::new(1, 2, vec![0, 0], 0, &[0]).unwrap();
        let plus = Dfa::new(2, 2, vec![1, 1, 1, 1], 0, &[1]).unwrap();
        let dfa = build_overlap_nfa(&all, &all).unwrap().determinize();
        assert_eq!(dfa.equivalent(&plus), Ok(true));
    }

    #[test]
    fn decomposition_examples_on_two_state_pair() {
        let (l, r) = (d2(), d2_prime());
        let initial = decompose_subset(&set(&[PairState::pending(0)]), &l, &r).unwrap();
        assert_eq!(initial.selector, 0);
        assert!(initial.core.is_empty() && initial.subcore.is_empty() && !initial.has_zero);

        let by_b = decompose_subset(
            &set(&[PairState::pending(0), PairState::running(0, 0)]),
            &l,
            &r,
        )
        .unwrap();
        assert_eq!(by_b.selector, 0);
        assert!(by_b.core.is_empty() && by_b.subcore.is_empty());
        assert!(by_b.has_zero);

        let by_a = decompose_subset(
            &set(&[
                PairState::pending(1),
                PairState::running(1, 1),
                PairState::finished(1),
            ]),
            &l,
            &r,
        )
        .unwrap();
        assert_eq!(by_a.selector, 1);
        assert_eq!(by_a.core, BTreeSet::from([1]));
        assert_eq!(by_a.subcore, BTreeSet::from([1]));
        assert!(!by_a.has_zero);
    }

    #[test]
    fn decomposition_rejects_malformed_subsets() {
        let (l, r) = (d2(), d2_prime());
        let check = |pairs: &[PairState]| decompose_subset(&set(pairs), &l, &r);
        assert_eq!(check(&[]), Err(DecompositionError::EmptySubset));
        assert_eq!(
            check(&[PairState::running(0, 1)]),
            Err(DecompositionError::NoSelector)
        );
        assert_eq!(
            check(&[PairState::pending(0), PairState::pending(1)]),
            Err(DecompositionError::SeveralSelectors {
                first: 0,
                second: 1
            })
        );
        assert_eq!(
            check(&[PairState::pending(0), PairState::running(1, 1)]),
            Err(DecompositionError::MixedLeftStates {
                selector: 0,
                other: 1
            })
        );
        assert_eq!(
            check(&[
                PairState::pending(0),
                PairState::running(0, 1),
                PairState::finished(0)
            ]),
            Err(DecompositionError::SubcoreOutsideCore { state: 0 })
        );
        // Selector 1 is final, so (t,1') must accompany (1,1').
        assert_eq!(
            check(&[PairState::pending(1), PairState::running(1, 1)]),
            Err(DecompositionError::FinalSelectorSubcore { selector: 1 })
        );
        assert_eq!(
            check(&[PairState::pending(1)]),
            Err(DecompositionError::EmptyCoreOffInitial { selector: 1 })
        );
        assert!(matches!(
            check(&[PairState::pending(5)]),
            Err(DecompositionError::OutOfRange { .. })
        ));
    }

    #[test]
    fn every_two_state_subset_decomposes_and_merges() {
        let (l, r) = (d2(), d2_prime());
        let report = check_reachable_subsets(&l, &r).unwrap();
        assert_eq!(report.reachable, report.decomposed);
        let det = build_overlap_nfa(&l, &r)
            .unwrap()
            .determinize_with_subsets();
        let mut merge_checks = 0;
        for s in &det.subsets {
            let parts = decompose_subset(s, &l, &r).unwrap();
            if !l.is_final(parts.selector) && !parts.has_zero {
                assert_eq!(merged_pair_equivalent(&l, &r, s), Ok(true), "{s}");
                merge_checks += 1;
            }
        }
        // At least the initial subset qualifies.
        assert!(merge_checks >= 1);
    }

    #[test]
    fn merge_check_rejects_final_selector() {
        let (l, r) = (d2(), d2_prime());
        let s = set(&[
            PairState::pending(1),
            PairState::running(1, 1),
            PairState::finished(1),
        ]);
        assert!(matches!(
            merged_pair_equivalent(&l, &r, &s),
            Err(OverlapError::Precondition(_))
        ));
        let s = set(&[PairState::pending(0), PairState::running(0, 0)]);
        assert!(matches!(
            merged_pair_equivalent(&l, &r, &s),
            Err(OverlapError::Precondition(_))
        ));
    }
}
