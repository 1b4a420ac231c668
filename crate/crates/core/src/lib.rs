//! Overlap assembly of regular languages.
//!
//! The overlap assembly of words `x = uv` and `y = vw` with a nonempty
//! overlap `v` is `uvw`; on languages it collects every such product. This
//! crate builds an ε-NFA for the overlap assembly of two DFA languages,
//! determinizes and minimizes it to measure exact state complexity, and
//! checks the result against a brute-force word-level oracle and the known
//! witness families.
//!
//! ```
//! use overlapsc::{overlap, witnesses};
//!
//! let left = witnesses::make_general_left(2, 3).unwrap();
//! let right = witnesses::make_general_right(3).unwrap();
//! let nfa = overlap::build_overlap_nfa(&left, &right).unwrap();
//! assert_eq!(nfa.determinize().state_complexity(), 26);
//! assert_eq!(witnesses::general_upper_bound(2, 3).unwrap(), 26);
//! ```

pub mod automata;
pub mod experiments;
pub mod format;
pub mod oracle;
pub mod overlap;
pub mod par;
pub mod witnesses;

pub use automata::{AutomatonError, Dfa, EpsilonNfa, PairState, StateId, StateSet, Symbol, Word};
pub use par::Execution;

/// Determinize and minimize the overlap construction of `left` and `right`.
pub fn overlap_dfa(left: &Dfa, right: &Dfa) -> Result<Dfa, overlap::OverlapError> {
    Ok(overlap::build_overlap_nfa(left, right)?
        .determinize()
        .minimize())
}
