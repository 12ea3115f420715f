//! Exact and heuristic search for the largest pattern-free subset of `Z/NZ`.
//!
//! A set is free when it contains no nontrivial configuration `{x + P_i(y)}` (nontrivial
//! meaning `y` separates all points mod `N`). The exact search is a depth-first
//! branch-and-bound over residues in increasing order with incremental violation checks;
//! the heuristic is a seeded random greedy insertion.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::vec;

use crate::counting::{count_configs, CountError};
use crate::patterns::PatternSpec;
use crate::rng::CounterRng;

/// Residues are tracked in a single 128-bit set, which bounds the exact search modulus.
pub const MAX_SEARCH_MODULUS: u64 = 127;

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub modulus: u64,
    pub pattern: Option<String>,
    /// Size of the best free set found.
    pub r: usize,
    /// One free set of that size, sorted.
    pub witness: Vec<u64>,
    pub nodes_explored: u64,
    /// True when the search proves no larger free set exists.
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Node budget; exhausting it returns the best set found so far with `exact = false`.
    pub node_budget: u64,
    /// Pin `0` into the set (valid by shift invariance: some maximum set contains 0).
    pub pin_zero: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { node_budget: u64::MAX, pin_zero: true }
    }
}

/// `A` is pattern-free iff it contains no nontrivial configuration.
pub fn is_free(p: &PatternSpec, a: &[u64], n: u64) -> Result<bool, CountError> {
    Ok(count_configs(p, a, n)?.nontrivial == 0)
}

/// All nontrivial configurations as bitmasks over residues, deduplicated.
fn config_masks(p: &PatternSpec, n: u64) -> Result<Vec<u128>, CountError> {
    assert!(n <= MAX_SEARCH_MODULUS, "exact search supports N <= {MAX_SEARCH_MODULUS}");
    let nn = n as usize;
    let t = p.len();
    let shifts: Vec<Vec<usize>> = p
        .polys()
        .iter()
        .map(|poly| {
            (0..n)
                .map(|y| poly.eval_mod(y, n).expect("integer coefficients") as usize)
                .collect()
        })
        .collect();
    let mut masks = Vec::new();
    for y in 0..nn {
        let distinct = (0..t).all(|i| (i + 1..t).all(|j| shifts[i][y] != shifts[j][y]));
        if !distinct {
            continue;
        }
        for x in 0..nn {
            let mut m: u128 = 0;
            for s in shifts.iter() {
                m |= 1u128 << ((x + s[y]) % nn);
            }
            masks.push(m);
        }
    }
    masks.sort_unstable();
    masks.dedup();
    Ok(masks)
}

/// For each residue, the configurations that contain it.
fn masks_by_residue(masks: &[u128], n: u64) -> Vec<Vec<u128>> {
    let mut by = vec![Vec::new(); n as usize];
    for &m in masks {
        for (r, slot) in by.iter_mut().enumerate() {
            if m >> r & 1 == 1 {
                slot.push(m);
            }
        }
    }
    by
}

/// Adding `c` to `chosen` stays free iff no configuration through `c` fits inside.
fn insertion_ok(by_residue: &[Vec<u128>], chosen: u128, c: usize) -> bool {
    let next = chosen | (1u128 << c);
    by_residue[c].iter().all(|&m| m & !next != 0)
}

/// Exact maximum free set by branch-and-bound (depth-first over residues in increasing
/// order; prune when the remaining candidates cannot beat the incumbent).
pub fn max_free_exact(p: &PatternSpec, n: u64, opts: &SearchOptions) -> Result<SearchResult, CountError> {
    let masks = config_masks(p, n)?;
    let by_residue = masks_by_residue(&masks, n);
    let nn = n as usize;

    struct Dfs<'a> {
        by_residue: &'a [Vec<u128>],
        nn: usize,
        best: u128,
        best_count: usize,
        nodes: u64,
        budget: u64,
        exhausted: bool,
    }

    impl Dfs<'_> {
        fn run(&mut self, chosen: u128, count: usize, next: usize) {
            if count > self.best_count {
                self.best_count = count;
                self.best = chosen;
            }
            if self.exhausted || count + (self.nn - next) <= self.best_count {
                return;
            }
            for c in next..self.nn {
                // Bound check again as the incumbent may have grown in a sibling.
                if count + (self.nn - c) <= self.best_count {
                    return;
                }
                self.nodes += 1;
                if self.nodes > self.budget {
                    self.exhausted = true;
                    return;
                }
                if insertion_ok(self.by_residue, chosen, c) {
                    self.run(chosen | (1u128 << c), count + 1, c + 1);
                    if self.exhausted {
                        return;
                    }
                }
            }
        }
    }

    let mut dfs = Dfs {
        by_residue: &by_residue,
        nn,
        best: 0,
        best_count: 0,
        nodes: 0,
        budget: opts.node_budget,
        exhausted: false,
    };
    if opts.pin_zero {
        // Singletons are always free (nontrivial configurations have >= 2 points),
        // and by shift invariance some maximum free set contains 0.
        dfs.run(1u128, 1, 1);
    } else {
        dfs.run(0u128, 0, 0);
    }

    let witness: Vec<u64> = (0..n).filter(|&r| dfs.best >> r & 1 == 1).collect();
    debug_assert!(is_free(p, &witness, n)?);
    Ok(SearchResult {
        modulus: n,
        pattern: p.name.clone(),
        r: dfs.best_count,
        witness,
        nodes_explored: dfs.nodes,
        exact: !dfs.exhausted,
    })
}

/// Randomized greedy insertion in a seeded order; the result is free but only a
/// lower bound on the maximum.
pub fn greedy_free(p: &PatternSpec, n: u64, seed: u64) -> Result<SearchResult, CountError> {
    let masks = config_masks(p, n)?;
    let by_residue = masks_by_residue(&masks, n);
    let nn = n as usize;
    let mut order: Vec<usize> = (0..nn).collect();
    let mut rng = CounterRng::new(seed, 0x6672);
    for i in (1..nn).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        order.swap(i, j);
    }
    let mut chosen: u128 = 0;
    let mut count = 0usize;
    for &c in &order {
        if insertion_ok(&by_residue, chosen, c) {
            chosen |= 1u128 << c;
            count += 1;
        }
    }
    let witness: Vec<u64> = (0..n).filter(|&r| chosen >> r & 1 == 1).collect();
    debug_assert!(is_free(p, &witness, n)?);
    Ok(SearchResult {
        modulus: n,
        pattern: p.name.clone(),
        r: count,
        witness,
        nodes_explored: nn as u64,
        exact: false,
    })
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Exhaustive reference: try every subset of `Z/NZ` through the counting path.

    use super::*;

    pub(crate) fn max_free_bruteforce(p: &PatternSpec, n: u64) -> usize {
        assert!(n <= 20, "oracle is exponential");
        let mut best = 0usize;
        for mask in 0u64..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let a: Vec<u64> = (0..n).filter(|&r| mask >> r & 1 == 1).collect();
            if is_free(p, &a, n).unwrap() {
                best = size;
            }
        }
        best
    }
}
