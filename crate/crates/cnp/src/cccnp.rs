//! Driver for the capped-component variant: find the smallest removal budget
//! under which every residual component can be brought down to at most `cap`
//! nodes.
//!
//! A greedy construction gives a feasible starting set; the driver then
//! lowers the budget one node at a time, running the population search with
//! the overflow metric and a target of zero at each level, and stops at the
//! first level it cannot make feasible.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::budget::Budget;
use crate::graph::Graph;
use crate::memetic::{macnp, Params};
use crate::solution::{Metric, SolutionState};
use crate::{Error, Result};

/// Parameters for the descending-budget driver.
#[derive(Clone, Copy, Debug)]
pub struct CcParams {
    /// Largest allowed residual component size.
    pub cap: u32,
    /// Parameters of the population search run at every level.
    pub inner: Params,
    /// Wall-clock limit for each level.
    pub level_time: Option<Duration>,
    /// Generation limit for each level.
    pub level_generations: Option<u64>,
    /// Wall-clock limit for the whole run.
    pub total_time: Option<Duration>,
    /// Stop as soon as a feasible set of at most this many nodes is known.
    pub target_k: Option<usize>,
}

/// What happened at one budget level.
#[derive(Clone, Debug)]
pub struct LevelReport {
    pub k: usize,
    pub feasible: bool,
    /// Best overflow reached at this level; zero means feasible.
    pub excess: u64,
    /// Best removal set found at this level, sorted.
    pub nodes: Vec<u32>,
    pub steps: u64,
    pub generations: u64,
    pub elapsed_seconds: Option<f64>,
}

/// Result of a descending-budget run.
#[derive(Clone, Debug)]
pub struct CcOutcome {
    /// Size of the greedy starting set.
    pub initial_k: usize,
    /// Smallest budget proven feasible.
    pub best_k: usize,
    /// Feasible removal set of size `best_k`, sorted.
    pub best_nodes: Vec<u32>,
    pub levels: Vec<LevelReport>,
    pub total_steps: u64,
}

/// Greedy feasible construction: while some component exceeds the cap, take a
/// largest oversized component (ties toward the smaller internal label) and
/// remove its member with the most neighbors inside it (ties toward the
/// smallest id). Returns the sorted removal set; empty when the graph is
/// already feasible.
pub fn construct_initial(g: &Graph, cap: u32) -> Result<Vec<u32>> {
    if cap == 0 {
        return Err(Error::InvalidArgument(
            "component cap must be at least 1".into(),
        ));
    }
    let mut state = SolutionState::new(g, Metric::ComponentExcess { cap }, 0);
    loop {
        let mut chosen: Option<(u32, u64)> = None;
        for &l in state.live_labels() {
            let s = state.component_size(l);
            if s <= cap as u64 {
                continue;
            }
            chosen = Some(match chosen {
                None => (l, s),
                Some((bl, bs)) => {
                    if s > bs || (s == bs && l < bl) {
                        (l, s)
                    } else {
                        (bl, bs)
                    }
                }
            });
        }
        let Some((c, _)) = chosen else { break };
        let members = state.component_members(c);
        let mut best = members[0];
        let mut best_deg = usize::MAX;
        for &u in members {
            let d = g
                .neighbors(u)
                .iter()
                .filter(|&&w| state.component_label(w) == c)
                .count();
            if best_deg == usize::MAX || d > best_deg || (d == best_deg && u < best) {
                best = u;
                best_deg = d;
            }
        }
        state.move_to_s(best);
    }
    Ok(state.solution())
}

/// Overflow of the untouched graph: the objective at a removal budget of
/// zero.
fn baseline_excess(g: &Graph, cap: u32) -> u64 {
    SolutionState::new(g, Metric::ComponentExcess { cap }, 0).objective()
}

/// Finds the smallest feasible removal budget by descending from the greedy
/// construction one node at a time. Each level runs the population search
/// with a target overflow of zero; the first level that stays infeasible
/// ends the descent.
pub fn maccc(g: &Graph, params: &CcParams, rng: &mut impl Rng) -> Result<CcOutcome> {
    let s0 = construct_initial(g, params.cap)?;
    let overall_deadline = params.total_time.map(|d| Instant::now() + d);
    let metric = Metric::ComponentExcess { cap: params.cap };

    let initial_k = s0.len();
    let mut best_k = initial_k;
    let mut best_nodes = s0;
    let mut levels: Vec<LevelReport> = Vec::new();
    let mut total_steps = 0u64;

    loop {
        if best_k == 0 || params.target_k.is_some_and(|t| best_k <= t) {
            break;
        }
        let k = best_k - 1;
        if k == 0 {
            // No search needed: feasibility of the empty set is a property
            // of the graph, and the descent only reaches this level when the
            // greedy construction had to remove something.
            let excess = baseline_excess(g, params.cap);
            let feasible = excess == 0;
            levels.push(LevelReport {
                k: 0,
                feasible,
                excess,
                nodes: Vec::new(),
                steps: 0,
                generations: 0,
                elapsed_seconds: None,
            });
            if feasible {
                best_k = 0;
                best_nodes = Vec::new();
            }
            break;
        }

        let mut level_time = params.level_time;
        if let Some(deadline) = overall_deadline {
            let remaining = deadline.saturating_duration_since(Instant::now());
            if remaining.is_zero() {
                break;
            }
            level_time = Some(level_time.map_or(remaining, |t| t.min(remaining)));
        }
        let mut budget = Budget::none().with_target(0);
        if let Some(t) = level_time {
            budget = budget.with_time_limit(t);
        }
        if let Some(gens) = params.level_generations {
            budget = budget.with_generations(gens);
        }

        let out = macnp(g, k, metric, &params.inner, rng, &budget)?;
        let feasible = out.best.objective == 0;
        total_steps += out.total_steps;
        levels.push(LevelReport {
            k,
            feasible,
            excess: out.best.objective,
            nodes: out.best.nodes.clone(),
            steps: out.total_steps,
            generations: out.generations,
            elapsed_seconds: out.elapsed_seconds,
        });
        if !feasible {
            break;
        }
        best_k = k;
        best_nodes = out.best.nodes;
    }

    Ok(CcOutcome {
        initial_k,
        best_k,
        best_nodes,
        levels,
        total_steps,
    })
}
