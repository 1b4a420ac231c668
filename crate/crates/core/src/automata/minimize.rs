//! Hopcroft partition refinement.
//!
//! The reachable part of the DFA is split into final / non-final blocks and
//! refined with splitters `(block, symbol)` until every block is stable. The
//! quotient automaton is then renumbered breadth-first so that two DFAs for
//! the same language minimize to identical values.

use super::{Dfa, StateId};

struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<StateId>>,
}

impl Partition {
    fn new(states: &[StateId], state_count: usize, is_final: impl Fn(StateId) -> bool) -> Self {
        let (finals, rest): (Vec<_>, Vec<_>) = states.iter().partition(|&&q| is_final(q));
        let mut block_of = vec![usize::MAX; state_count];
        let mut blocks = Vec::with_capacity(2);
        for block in [finals, rest] {
            if !block.is_empty() {
                for &q in &block {
                    block_of[q] = blocks.len();
                }
                blocks.push(block);
            }
        }
        Self { block_of, blocks }
    }
}

pub(crate) fn minimize(dfa: &Dfa) -> Dfa {
    let k = dfa.alphabet_size();
    let n = dfa.state_count();
    let reachable = dfa.reachable_states();

    // preimages[a][q] = reachable states p with δ(p, a) = q
    let mut preimages = vec![vec![Vec::new(); n]; k];
    for &p in &reachable {
        for (a, &q) in dfa.row(p).iter().enumerate() {
            preimages[a][q].push(p);
        }
    }

    let mut part = Partition::new(&reachable, n, |q| dfa.is_final(q));
    let mut pending: Vec<(usize, usize)> = Vec::new();
    if part.blocks.len() == 2 {
        let smaller = usize::from(part.blocks[1].len() < part.blocks[0].len());
        pending.extend((0..k).map(|a| (smaller, a)));
    }

    let mut marked = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut hits: Vec<Vec<StateId>> = Vec::new();

    while let Some((splitter, a)) = pending.pop() {
        // Collect predecessors of the splitter block under `a`, grouped by block.
        for &q in &part.blocks[splitter] {
            for &p in &preimages[a][q] {
                if !marked[p] {
                    marked[p] = true;
                    let b = part.block_of[p];
                    if hits.len() <= b {
                        hits.resize_with(b + 1, Vec::new);
                    }
                    if hits[b].is_empty() {
                        touched.push(b);
                    }
                    hits[b].push(p);
                }
            }
        }

        for b in touched.drain(..) {
            let inside = std::mem::take(&mut hits[b]);
            let outside: Vec<StateId> = if inside.len() == part.blocks[b].len() {
                Vec::new()
            } else {
                part.blocks[b]
                    .iter()
                    .copied()
                    .filter(|&q| !marked[q])
                    .collect()
            };
            for &p in &inside {
                marked[p] = false;
            }
            if outside.is_empty() {
                continue;
            }
            let new_id = part.blocks.len();
            // The larger half keeps the old id, so the new block is always the
            // smaller one and can be queued for every symbol.
            let (keep, split_off) = if inside.len() >= outside.len() {
                (inside, outside)
            } else {
                (outside, inside)
            };
            for &q in &split_off {
                part.block_of[q] = new_id;
            }
            part.blocks[b] = keep;
            part.blocks.push(split_off);
            pending.extend((0..k).map(|c| (new_id, c)));
        }
    }

    let block_count = part.blocks.len();
    let table = (0..block_count)
        .flat_map(|b| {
            let rep = part.blocks[b][0];
            dfa.row(rep)
                .iter()
                .map(|&t| part.block_of[t])
                .collect::<Vec<_>>()
        })
        .collect();
    let finals: Vec<usize> = (0..block_count)
        .filter(|&b| dfa.is_final(part.blocks[b][0]))
        .collect();
    let quotient = Dfa::new(block_count, k, table, part.block_of[dfa.initial()], &finals)
        .expect("quotient of a valid DFA is valid");
    quotient.canonical()
}
