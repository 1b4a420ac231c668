//! Automata over pair states `(left, right)` where the left component is a
//! state of the left operand or the marker `t` (left run finished), and the
//! right component is a state of the right operand or the marker `s'` (right
//! run not yet started).

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use super::{AutomatonError, Dfa, Nfa, StateId, Symbol};

/// First coordinate of a pair state. Left-operand states sort before `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Left {
    State(StateId),
    Finished,
}

/// Second coordinate of a pair state. `s'` sorts before right-operand states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Right {
    Pending,
    State(StateId),
}

/// A state of the overlap construction. The combination `(t, s')` cannot be
/// built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairState {
    left: Left,
    right: Right,
}

impl PairState {
    /// `(q, s')`: reading the prefix before the overlap.
    pub fn pending(q: StateId) -> Self {
        Self {
            left: Left::State(q),
            right: Right::Pending,
        }
    }

    /// `(q, p')`: both operands reading the overlap.
    pub fn running(q: StateId, p: StateId) -> Self {
        Self {
            left: Left::State(q),
            right: Right::State(p),
        }
    }

    /// `(t, p')`: only the right operand reading.
    pub fn finished(p: StateId) -> Self {
        Self {
            left: Left::Finished,
            right: Right::State(p),
        }
    }

    pub fn left(&self) -> Left {
        self.left
    }

    pub fn right(&self) -> Right {
        self.right
    }
}

impl fmt::Display for PairState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.left {
            Left::State(q) => write!(f, "({q},")?,
            Left::Finished => write!(f, "(t,")?,
        }
        match self.right {
            Right::Pending => write!(f, "s')"),
            Right::State(p) => write!(f, "{p}')"),
        }
    }
}

/// A sorted, duplicate-free set of pair states.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet(Vec<PairState>);

impl StateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, state: &PairState) -> bool {
        self.0.binary_search(state).is_ok()
    }

    pub fn insert(&mut self, state: PairState) -> bool {
        match self.0.binary_search(&state) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, state);
                true
            }
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PairState> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[PairState] {
        &self.0
    }
}

impl FromIterator<PairState> for StateSet {
    fn from_iter<I: IntoIterator<Item = PairState>>(iter: I) -> Self {
        let mut v: Vec<PairState> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl<'a> IntoIterator for &'a StateSet {
    type Item = &'a PairState;
    type IntoIter = std::slice::Iter<'a, PairState>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// An ε-NFA whose states are pair states over a left automaton with
/// `left_states` states and a right automaton with `right_states` states.
///
/// The state set is every pair except `(t, s')`. Internally states are
/// indexed so that index order agrees with [`PairState`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonNfa {
    left_states: usize,
    right_states: usize,
    inner: Nfa,
}

/// Determinization of an [`EpsilonNfa`], with the subset behind each DFA state.
#[derive(Debug, Clone)]
pub struct PairDeterminization {
    pub dfa: Dfa,
    pub subsets: Vec<StateSet>,
}

impl EpsilonNfa {
    pub fn new(
        left_states: usize,
        right_states: usize,
        alphabet_size: usize,
    ) -> Result<Self, AutomatonError> {
        if left_states == 0 || right_states == 0 {
            return Err(AutomatonError::NoStates);
        }
        let inner = Nfa::new((left_states + 1) * (right_states + 1), alphabet_size)?;
        Ok(Self {
            left_states,
            right_states,
            inner,
        })
    }

    pub fn left_states(&self) -> usize {
        self.left_states
    }

    pub fn right_states(&self) -> usize {
        self.right_states
    }

    pub fn alphabet_size(&self) -> usize {
        self.inner.alphabet_size()
    }

    /// Number of pair states, `(m + 1)(n + 1) - 1`.
    pub fn state_count(&self) -> usize {
        (self.left_states + 1) * (self.right_states + 1) - 1
    }

    /// The underlying integer-indexed automaton. Index `m * (n + 1)`, which
    /// would be `(t, s')`, is never used.
    pub fn as_nfa(&self) -> &Nfa {
        &self.inner
    }

    pub fn index_of(&self, state: PairState) -> Result<usize, AutomatonError> {
        let row = match state.left {
            Left::State(q) if q < self.left_states => q,
            Left::Finished => self.left_states,
            Left::State(q) => {
                return Err(AutomatonError::StateOutOfRange {
                    state: q,
                    state_count: self.left_states,
                })
            }
        };
        let col = match state.right {
            Right::Pending => 0,
            Right::State(p) if p < self.right_states => p + 1,
            Right::State(p) => {
                return Err(AutomatonError::StateOutOfRange {
                    state: p,
                    state_count: self.right_states,
                })
            }
        };
        Ok(row * (self.right_states + 1) + col)
    }

    pub fn state_at(&self, index: usize) -> Option<PairState> {
        let width = self.right_states + 1;
        let (row, col) = (index / width, index % width);
        let left = match row {
            r if r < self.left_states => Left::State(r),
            r if r == self.left_states => Left::Finished,
            _ => return None,
        };
        let right = if col == 0 {
            Right::Pending
        } else {
            Right::State(col - 1)
        };
        if left == Left::Finished && right == Right::Pending {
            return None;
        }
        Some(PairState { left, right })
    }

    /// All pair states in increasing order.
    pub fn states(&self) -> Vec<PairState> {
        (0..self.inner.state_count())
            .filter_map(|i| self.state_at(i))
            .collect()
    }

    pub fn add_transition(
        &mut self,
        from: PairState,
        symbol: Symbol,
        to: PairState,
    ) -> Result<(), AutomatonError> {
        let (f, t) = (self.index_of(from)?, self.index_of(to)?);
        self.inner.add_transition(f, symbol, t)
    }

    pub fn add_epsilon(&mut self, from: PairState, to: PairState) -> Result<(), AutomatonError> {
        let (f, t) = (self.index_of(from)?, self.index_of(to)?);
        self.inner.add_epsilon(f, t)
    }

    pub fn set_initial(&mut self, state: PairState) -> Result<(), AutomatonError> {
        let i = self.index_of(state)?;
        self.inner.set_initial(i)
    }

    pub fn set_final(&mut self, state: PairState) -> Result<(), AutomatonError> {
        let i = self.index_of(state)?;
        self.inner.set_final(i)
    }

    fn to_set(&self, bits: &FixedBitSet) -> StateSet {
        bits.ones().filter_map(|i| self.state_at(i)).collect()
    }

    fn to_bits(&self, set: &StateSet) -> Result<FixedBitSet, AutomatonError> {
        let mut bits = self.inner.empty_subset();
        for &s in set {
            bits.insert(self.index_of(s)?);
        }
        Ok(bits)
    }

    pub fn initials(&self) -> StateSet {
        self.to_set(self.inner.initials())
    }

    pub fn finals(&self) -> StateSet {
        self.to_set(self.inner.finals())
    }

    pub fn labeled_transitions(&self) -> BTreeSet<(PairState, Symbol, PairState)> {
        let mut out = BTreeSet::new();
        for (i, from) in (0..self.inner.state_count()).filter_map(|i| Some((i, self.state_at(i)?)))
        {
            for a in 0..self.alphabet_size() {
                for &j in self.inner.targets(i, a) {
                    if let Some(to) = self.state_at(j) {
                        out.insert((from, a, to));
                    }
                }
            }
        }
        out
    }

    pub fn epsilon_transitions(&self) -> BTreeSet<(PairState, PairState)> {
        let mut out = BTreeSet::new();
        for (i, from) in (0..self.inner.state_count()).filter_map(|i| Some((i, self.state_at(i)?)))
        {
            for &j in self.inner.epsilon_targets(i) {
                if let Some(to) = self.state_at(j) {
                    out.insert((from, to));
                }
            }
        }
        out
    }

    /// Least superset of `set` closed under ε-transitions.
    pub fn epsilon_closure(&self, set: &StateSet) -> Result<StateSet, AutomatonError> {
        let bits = self.to_bits(set)?;
        Ok(self.to_set(&self.inner.epsilon_closure(&bits)))
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        self.inner.accepts(word)
    }

    pub fn determinize(&self) -> Dfa {
        self.inner.determinize().dfa
    }

    /// Subset construction keeping the reachable subsets, indexed by DFA state.
    pub fn determinize_with_subsets(&self) -> PairDeterminization {
        let det = self.inner.determinize();
        PairDeterminization {
            subsets: det.subsets.iter().map(|b| self.to_set(b)).collect(),
            dfa: det.dfa,
        }
    }

    /// Subset construction started from the ε-closure of `start`.
    pub fn determinize_from(&self, start: &StateSet) -> Result<Dfa, AutomatonError> {
        let bits = self.to_bits(start)?;
        Ok(self.inner.determinize_from(&bits).dfa)
    }
}
