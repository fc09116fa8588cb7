//! Seeded multi-trial execution and from-scratch solution validation.

use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::cccnp::{maccc, CcOutcome, CcParams};
use crate::graph::{components_of, Graph};
use crate::memetic::{macnp, Params, SolveOutcome};
use crate::solution::{evaluate_excess, evaluate_pairwise, Metric};
use crate::{Error, Result};

/// Budget template. A fresh [`Budget`] is instantiated inside each trial so
/// that every trial gets the full time allowance.
#[derive(Clone, Copy, Debug, Default)]
pub struct BudgetSpec {
    pub time_limit: Option<Duration>,
    pub generations: Option<u64>,
    pub target: Option<u64>,
}

impl BudgetSpec {
    pub fn build(&self) -> Budget {
        let mut b = Budget::none();
        if let Some(t) = self.time_limit {
            b = b.with_time_limit(t);
        }
        if let Some(g) = self.generations {
            b = b.with_generations(g);
        }
        if let Some(t) = self.target {
            b = b.with_target(t);
        }
        b
    }
}

/// Runs independent fixed-budget searches; trial `i` is seeded with
/// `base_seed + i`. Results come back in trial order regardless of
/// parallelism, and a trial's results depend only on its seed (and, for
/// deadline-limited runs, on wall-clock scheduling).
#[allow(clippy::too_many_arguments)]
pub fn run_cnp_trials(
    g: &Graph,
    k: usize,
    metric: Metric,
    params: &Params,
    spec: &BudgetSpec,
    base_seed: u64,
    trials: usize,
    parallel: bool,
) -> Result<Vec<SolveOutcome>> {
    let run_one = |i: usize| -> Result<SolveOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(i as u64));
        macnp(g, k, metric, params, &mut rng, &spec.build())
    };
    if parallel {
        (0..trials).into_par_iter().map(run_one).collect()
    } else {
        (0..trials).map(run_one).collect()
    }
}

/// Runs independent descending-budget searches, seeded as above.
pub fn run_cc_trials(
    g: &Graph,
    params: &CcParams,
    base_seed: u64,
    trials: usize,
    parallel: bool,
) -> Result<Vec<CcOutcome>> {
    let run_one = |i: usize| -> Result<CcOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(i as u64));
        maccc(g, params, &mut rng)
    };
    if parallel {
        (0..trials).into_par_iter().map(run_one).collect()
    } else {
        (0..trials).map(run_one).collect()
    }
}

/// Recomputes a solution's objective from scratch after checking its shape:
/// ids in range, no duplicates, and, when given, an exact set size.
pub fn validate_solution(
    g: &Graph,
    nodes: &[u32],
    expected_len: Option<usize>,
    metric: Metric,
) -> Result<u64> {
    if let Some(len) = expected_len {
        if nodes.len() != len {
            return Err(Error::InvalidArgument(format!(
                "solution has {} nodes, expected {len}",
                nodes.len()
            )));
        }
    }
    let mut removed = vec![false; g.n()];
    for &u in nodes {
        if (u as usize) >= g.n() {
            return Err(Error::InvalidArgument(format!(
                "node {u} out of range 0..{}",
                g.n()
            )));
        }
        if removed[u as usize] {
            return Err(Error::InvalidArgument(format!(
                "duplicate node {u} in solution"
            )));
        }
        removed[u as usize] = true;
    }
    let lab = components_of(g, &removed);
    match metric {
        Metric::PairwiseConnectivity => Ok(evaluate_pairwise(&lab)),
        Metric::ComponentExcess { cap } => evaluate_excess(&lab, cap),
    }
}
