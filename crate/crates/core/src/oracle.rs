//! Brute-force ground truth for overlap assembly.
//!
//! Everything here works on explicit finite word sets and never touches the
//! ε-NFA construction, so it can be used to check it.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::automata::{Dfa, Word};
use crate::par::{self, Execution};

/// The words of a language up to a length bound, in length-lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedLanguage {
    pub alphabet_size: usize,
    pub max_len: usize,
    pub words: BTreeSet<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("operand enumerated up to length {operand}, but products up to length {requested} need operands up to the same length")]
    InsufficientHorizon { operand: usize, requested: usize },
    #[error("operands use alphabets of size {left} and {right}")]
    AlphabetMismatch { left: usize, right: usize },
}

impl BoundedLanguage {
    pub fn empty(alphabet_size: usize, max_len: usize) -> Self {
        Self {
            alphabet_size,
            max_len,
            words: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &[usize]) -> bool {
        self.words.contains(&Word::from(word))
    }
}

/// All words accepted by `dfa` of length at most `max_len`.
pub fn enumerate_language(dfa: &Dfa, max_len: usize) -> BoundedLanguage {
    let mut words = BTreeSet::new();
    // Frontier of (word, state) pairs at the current length.
    let mut frontier = vec![(Vec::new(), dfa.initial())];
    for len in 0..=max_len {
        for (w, q) in &frontier {
            if dfa.is_final(*q) {
                words.insert(Word(w.clone()));
            }
        }
        if len == max_len {
            break;
        }
        frontier = frontier
            .into_iter()
            .flat_map(|(w, q)| {
                (0..dfa.alphabet_size()).map(move |a| {
                    let mut next = w.clone();
                    next.push(a);
                    (next, dfa.next(q, a))
                })
            })
            .collect();
    }
    BoundedLanguage {
        alphabet_size: dfa.alphabet_size(),
        max_len,
        words,
    }
}

/// Words of `L(a) ⊙ L(b)` of length at most `max_len`, from pairwise word
/// products.
///
/// A product `z = uvw` satisfies `|uv| ≤ |z|` and `|vw| ≤ |z|`, so operands
/// enumerated up to `max_len` are enough; shorter horizons are rejected.
pub fn brute_force_overlap(
    a: &BoundedLanguage,
    b: &BoundedLanguage,
    max_len: usize,
) -> Result<BoundedLanguage, OracleError> {
    brute_force_overlap_with(a, b, max_len, Execution::default())
}

pub fn brute_force_overlap_with(
    a: &BoundedLanguage,
    b: &BoundedLanguage,
    max_len: usize,
    exec: Execution,
) -> Result<BoundedLanguage, OracleError> {
    if a.alphabet_size != b.alphabet_size {
        return Err(OracleError::AlphabetMismatch {
            left: a.alphabet_size,
            right: b.alphabet_size,
        });
    }
    for operand in [a.max_len, b.max_len] {
        if operand < max_len {
            return Err(OracleError::InsufficientHorizon {
                operand,
                requested: max_len,
            });
        }
    }
    let lefts: Vec<&Word> = a.words.iter().filter(|w| w.len() <= max_len).collect();
    let rights: Vec<&Word> = b.words.iter().filter(|w| w.len() <= max_len).collect();
    let words = par::map_reduce(
        exec,
        &lefts,
        BTreeSet::new(),
        |x| {
            let mut out = BTreeSet::new();
            for y in &rights {
                // Overlaps shorter than |x| + |y| - max_len give products past the bound.
                let shortest = (x.len() + y.len()).saturating_sub(max_len).max(1);
                for k in shortest..=x.len().min(y.len()) {
                    if x[x.len() - k..] == y[..k] {
                        let mut z = Vec::with_capacity(x.len() + y.len() - k);
                        z.extend_from_slice(x);
                        z.extend_from_slice(&y[k..]);
                        out.insert(Word(z));
                    }
                }
            }
            out
        },
        |mut acc, mut more| {
            if acc.len() < more.len() {
                std::mem::swap(&mut acc, &mut more);
            }
            acc.extend(more);
            acc
        },
    );
    Ok(BoundedLanguage {
        alphabet_size: a.alphabet_size,
        max_len,
        words,
    })
}
