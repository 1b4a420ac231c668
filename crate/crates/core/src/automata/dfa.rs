use std::collections::{HashSet, VecDeque};

use super::{AutomatonError, StateId, Symbol};

/// A complete deterministic finite automaton.
///
/// States are `0..state_count` and symbols are `0..alphabet_size`. The
/// transition table is total: every `(state, symbol)` pair has a target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    state_count: usize,
    alphabet_size: usize,
    table: Vec<StateId>,
    initial: StateId,
    finals: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA from a row-major transition table
    /// (`table[state * alphabet_size + symbol]`).
    pub fn new(
        state_count: usize,
        alphabet_size: usize,
        table: Vec<StateId>,
        initial: StateId,
        finals: &[StateId],
    ) -> Result<Self, AutomatonError> {
        if state_count == 0 {
            return Err(AutomatonError::NoStates);
        }
        if alphabet_size == 0 {
            return Err(AutomatonError::EmptyAlphabet);
        }
        let expected = state_count * alphabet_size;
        if table.len() != expected {
            return Err(AutomatonError::TableSize {
                expected,
                found: table.len(),
            });
        }
        if let Some(pos) = table.iter().position(|&t| t >= state_count) {
            return Err(AutomatonError::TargetOutOfRange {
                state: pos / alphabet_size,
                symbol: pos % alphabet_size,
                target: table[pos],
                state_count,
            });
        }
        if initial >= state_count {
            return Err(AutomatonError::InitialOutOfRange {
                initial,
                state_count,
            });
        }
        let mut is_final = vec![false; state_count];
        for &f in finals {
            if f >= state_count {
                return Err(AutomatonError::FinalOutOfRange {
                    state: f,
                    state_count,
                });
            }
            is_final[f] = true;
        }
        Ok(Self {
            state_count,
            alphabet_size,
            table,
            initial,
            finals: is_final,
        })
    }

    /// Builds a DFA whose transition function is given by a closure.
    pub fn from_fn(
        state_count: usize,
        alphabet_size: usize,
        initial: StateId,
        finals: &[StateId],
        delta: impl Fn(StateId, Symbol) -> StateId,
    ) -> Result<Self, AutomatonError> {
        let table = (0..state_count)
            .flat_map(|q| (0..alphabet_size).map(move |a| (q, a)))
            .map(|(q, a)| delta(q, a))
            .collect();
        Self::new(state_count, alphabet_size, table, initial, finals)
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// Target of `state` under `symbol`. Panics on out-of-range arguments.
    #[inline]
    pub fn next(&self, state: StateId, symbol: Symbol) -> StateId {
        self.table[state * self.alphabet_size + symbol]
    }

    /// The outgoing row of `state`, indexed by symbol.
    pub fn row(&self, state: StateId) -> &[StateId] {
        &self.table[state * self.alphabet_size..(state + 1) * self.alphabet_size]
    }

    #[inline]
    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state]
    }

    /// Final states in increasing order.
    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter_map(|(q, &f)| f.then_some(q))
    }

    pub fn final_count(&self) -> usize {
        self.finals.iter().filter(|&&f| f).count()
    }

    /// Runs `word` from `state`, checking every symbol against the alphabet.
    pub fn run_from(&self, state: StateId, word: &[Symbol]) -> Result<StateId, AutomatonError> {
        word.iter().try_fold(state, |q, &a| {
            if a >= self.alphabet_size {
                Err(AutomatonError::SymbolOutOfRange {
                    symbol: a,
                    alphabet_size: self.alphabet_size,
                })
            } else {
                Ok(self.next(q, a))
            }
        })
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        self.run_from(self.initial, word).map(|q| self.is_final(q))
    }

    /// States reachable from the initial state, in breadth-first order with
    /// symbols expanded in index order.
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count];
        let mut order = Vec::with_capacity(self.state_count);
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &t in self.row(q) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Trims unreachable states and renumbers the rest breadth-first from
    /// the initial state (symbols in index order).
    pub fn canonical(&self) -> Dfa {
        let order = self.reachable_states();
        let mut rename = vec![usize::MAX; self.state_count];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new;
        }
        let table = order
            .iter()
            .flat_map(|&old| self.row(old).iter().map(|&t| rename[t]))
            .collect();
        Dfa {
            state_count: order.len(),
            alphabet_size: self.alphabet_size,
            table,
            initial: 0,
            finals: order.iter().map(|&old| self.is_final(old)).collect(),
        }
    }

    /// Language equivalence, decided by breadth-first search over the
    /// reachable part of the product automaton.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, AutomatonError> {
        if self.alphabet_size != other.alphabet_size {
            return Err(AutomatonError::AlphabetMismatch {
                left: self.alphabet_size,
                right: other.alphabet_size,
            });
        }
        let start = (self.initial, other.initial);
        let mut seen = HashSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some((p, q)) = queue.pop_front() {
            if self.is_final(p) != other.is_final(q) {
                return Ok(false);
            }
            for a in 0..self.alphabet_size {
                let succ = (self.next(p, a), other.next(q, a));
                if seen.insert(succ) {
                    queue.push_back(succ);
                }
            }
        }
        Ok(true)
    }

    /// The minimal complete DFA for the same language, canonically numbered.
    pub fn minimize(&self) -> Dfa {
        super::minimize::minimize(self)
    }

    /// Number of states of the minimal complete DFA (sink included).
    pub fn state_complexity(&self) -> usize {
        self.minimize().state_count
    }

    /// Every state is reachable and no two states are equivalent.
    pub fn is_minimal(&self) -> bool {
        self.state_complexity() == self.state_count
    }

    /// Whether `symbol` acts as a bijection on the states.
    pub fn is_permutation(&self, symbol: Symbol) -> bool {
        let mut hit = vec![false; self.state_count];
        (0..self.state_count).all(|q| !std::mem::replace(&mut hit[self.next(q, symbol)], true))
    }

    /// Whether `symbol` fixes every state.
    pub fn is_identity(&self, symbol: Symbol) -> bool {
        (0..self.state_count).all(|q| self.next(q, symbol) == q)
    }
}
