use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use super::{AutomatonError, Dfa, StateId, Symbol};

/// A nondeterministic automaton with ε-transitions over integer states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    state_count: usize,
    alphabet_size: usize,
    // labeled[state * alphabet_size + symbol]
    labeled: Vec<Vec<StateId>>,
    epsilon: Vec<Vec<StateId>>,
    initials: FixedBitSet,
    finals: FixedBitSet,
}

/// Result of the subset construction: the DFA and, for each of its states,
/// the ε-closed subset of NFA states it stands for.
#[derive(Debug, Clone)]
pub struct Determinization {
    pub dfa: Dfa,
    pub subsets: Vec<FixedBitSet>,
}

impl Nfa {
    pub fn new(state_count: usize, alphabet_size: usize) -> Result<Self, AutomatonError> {
        if state_count == 0 {
            return Err(AutomatonError::NoStates);
        }
        if alphabet_size == 0 {
            return Err(AutomatonError::EmptyAlphabet);
        }
        Ok(Self {
            state_count,
            alphabet_size,
            labeled: vec![Vec::new(); state_count * alphabet_size],
            epsilon: vec![Vec::new(); state_count],
            initials: FixedBitSet::with_capacity(state_count),
            finals: FixedBitSet::with_capacity(state_count),
        })
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn check_state(&self, state: StateId) -> Result<(), AutomatonError> {
        if state < self.state_count {
            Ok(())
        } else {
            Err(AutomatonError::StateOutOfRange {
                state,
                state_count: self.state_count,
            })
        }
    }

    pub fn add_transition(
        &mut self,
        from: StateId,
        symbol: Symbol,
        to: StateId,
    ) -> Result<(), AutomatonError> {
        self.check_state(from)?;
        self.check_state(to)?;
        if symbol >= self.alphabet_size {
            return Err(AutomatonError::SymbolOutOfRange {
                symbol,
                alphabet_size: self.alphabet_size,
            });
        }
        let targets = &mut self.labeled[from * self.alphabet_size + symbol];
        if let Err(pos) = targets.binary_search(&to) {
            targets.insert(pos, to);
        }
        Ok(())
    }

    pub fn add_epsilon(&mut self, from: StateId, to: StateId) -> Result<(), AutomatonError> {
        self.check_state(from)?;
        self.check_state(to)?;
        let targets = &mut self.epsilon[from];
        if let Err(pos) = targets.binary_search(&to) {
            targets.insert(pos, to);
        }
        Ok(())
    }

    pub fn set_initial(&mut self, state: StateId) -> Result<(), AutomatonError> {
        self.check_state(state)?;
        self.initials.insert(state);
        Ok(())
    }

    pub fn set_final(&mut self, state: StateId) -> Result<(), AutomatonError> {
        self.check_state(state)?;
        self.finals.insert(state);
        Ok(())
    }

    pub fn targets(&self, state: StateId, symbol: Symbol) -> &[StateId] {
        &self.labeled[state * self.alphabet_size + symbol]
    }

    pub fn epsilon_targets(&self, state: StateId) -> &[StateId] {
        &self.epsilon[state]
    }

    pub fn initials(&self) -> &FixedBitSet {
        &self.initials
    }

    pub fn finals(&self) -> &FixedBitSet {
        &self.finals
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals.contains(state)
    }

    /// An empty subset sized for this automaton.
    pub fn empty_subset(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.state_count)
    }

    /// Closes `set` under ε-transitions in place.
    pub fn close(&self, set: &mut FixedBitSet) {
        let mut stack: Vec<StateId> = set.ones().collect();
        while let Some(q) = stack.pop() {
            for &r in &self.epsilon[q] {
                if !set.put(r) {
                    stack.push(r);
                }
            }
        }
    }

    pub fn epsilon_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut closed = set.clone();
        closed.grow(self.state_count);
        self.close(&mut closed);
        closed
    }

    /// ε-closed image of `set` under `symbol`.
    pub fn step(&self, set: &FixedBitSet, symbol: Symbol) -> FixedBitSet {
        let mut image = self.empty_subset();
        for q in set.ones() {
            for &r in self.targets(q, symbol) {
                image.insert(r);
            }
        }
        self.close(&mut image);
        image
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomatonError> {
        let mut current = self.epsilon_closure(&self.initials);
        for &a in word {
            if a >= self.alphabet_size {
                return Err(AutomatonError::SymbolOutOfRange {
                    symbol: a,
                    alphabet_size: self.alphabet_size,
                });
            }
            current = self.step(&current, a);
        }
        Ok(!current.is_disjoint(&self.finals))
    }

    /// Subset construction from the ε-closure of the initial states.
    pub fn determinize(&self) -> Determinization {
        self.determinize_from(&self.initials)
    }

    /// Subset construction from the ε-closure of `start`.
    ///
    /// DFA states are numbered breadth-first from the start subset, expanding
    /// symbols in index order. The empty subset appears as an ordinary sink
    /// state when it is reachable.
    pub fn determinize_from(&self, start: &FixedBitSet) -> Determinization {
        let start = self.epsilon_closure(start);
        let mut index: HashMap<FixedBitSet, StateId> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut table = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            for a in 0..self.alphabet_size {
                let image = self.step(&subsets[id], a);
                let target = match index.get(&image) {
                    Some(&t) => t,
                    None => {
                        let t = subsets.len();
                        index.insert(image.clone(), t);
                        subsets.push(image);
                        queue.push_back(t);
                        t
                    }
                };
                table.push(target);
            }
        }
        let finals: Vec<StateId> = subsets
            .iter()
            .enumerate()
            .filter_map(|(i, s)| (!s.is_disjoint(&self.finals)).then_some(i))
            .collect();
        let dfa = Dfa::new(subsets.len(), self.alphabet_size, table, 0, &finals)
            .expect("subset construction yields a complete DFA");
        Determinization { dfa, subsets }
    }
}
