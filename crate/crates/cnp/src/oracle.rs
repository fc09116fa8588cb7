//! Exhaustive reference solver for small instances.
//!
//! Enumerates every removal set of the requested size and evaluates each one
//! from scratch. It shares no code with the incremental search state, so it
//! serves as an independent ground truth in tests. The subset count is capped
//! to keep runtimes sane.

use crate::graph::{components_of, Graph};
use crate::solution::{evaluate_excess, evaluate_pairwise, Metric};
use crate::{Error, Result};

/// Most subsets the exhaustive solver will enumerate.
pub const ORACLE_SUBSET_LIMIT: u128 = 1_000_000;

/// `min(C(n, k), cap)`, computed without overflow for any practical `n`.
pub fn binomial_capped(n: usize, k: usize, cap: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc >= cap {
            return cap;
        }
    }
    acc.min(cap)
}

/// Advances `comb` to the next size-`k` subset of `0..n` in lexicographic
/// order; `false` when `comb` was the last one.
fn next_combination(comb: &mut [u32], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < (n - k + i) as u32 {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Optimal objective over all removal sets of exactly `k` nodes, with the
/// lexicographically smallest optimal set. Fails with
/// [`Error::SearchSpaceTooLarge`] when `C(n, k)` exceeds
/// [`ORACLE_SUBSET_LIMIT`].
pub fn brute_force_optimum(g: &Graph, k: usize, metric: Metric) -> Result<(u64, Vec<u32>)> {
    let n = g.n();
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "removal budget {k} exceeds node count {n}"
        )));
    }
    if binomial_capped(n, k, ORACLE_SUBSET_LIMIT + 1) > ORACLE_SUBSET_LIMIT {
        return Err(Error::SearchSpaceTooLarge {
            n,
            k,
            limit: ORACLE_SUBSET_LIMIT as u64,
        });
    }

    let mut removed = vec![false; n];
    let mut comb: Vec<u32> = (0..k as u32).collect();
    let mut best_f = u64::MAX;
    let mut best: Vec<u32> = Vec::new();
    loop {
        for &u in &comb {
            removed[u as usize] = true;
        }
        let lab = components_of(g, &removed);
        let f = match metric {
            Metric::PairwiseConnectivity => evaluate_pairwise(&lab),
            Metric::ComponentExcess { cap } => evaluate_excess(&lab, cap)?,
        };
        if f < best_f {
            best_f = f;
            best = comb.clone();
        }
        for &u in &comb {
            removed[u as usize] = false;
        }
        if !next_combination(&mut comb, n) {
            break;
        }
    }
    Ok((best_f, best))
}
