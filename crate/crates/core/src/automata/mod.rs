//! Complete DFAs, ε-NFAs, subset construction and minimization.

mod dfa;
mod minimize;
mod nfa;
mod pair;
mod word;

pub use dfa::Dfa;
pub use nfa::{Determinization, Nfa};
pub use pair::{EpsilonNfa, Left, PairDeterminization, PairState, Right, StateSet};
pub use word::Word;

/// Index of a state within an automaton.
pub type StateId = usize;

/// Index of a letter; symbol `i` is rendered as `a_i`.
pub type Symbol = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("an automaton needs at least one state")]
    NoStates,
    #[error("the alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("transition table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("transition ({state}, a_{symbol}) targets {target}, but there are only {state_count} states")]
    TargetOutOfRange {
        state: StateId,
        symbol: Symbol,
        target: StateId,
        state_count: usize,
    },
    #[error("initial state {initial} out of range (state count {state_count})")]
    InitialOutOfRange {
        initial: StateId,
        state_count: usize,
    },
    #[error("final state {state} out of range (state count {state_count})")]
    FinalOutOfRange { state: StateId, state_count: usize },
    #[error("state {state} out of range (state count {state_count})")]
    StateOutOfRange { state: StateId, state_count: usize },
    #[error("symbol a_{symbol} is outside the alphabet of size {alphabet_size}")]
    SymbolOutOfRange {
        symbol: Symbol,
        alphabet_size: usize,
    },
    #[error("automata over different alphabets are incomparable ({left} vs {right} symbols)")]
    AlphabetMismatch { left: usize, right: usize },
}
