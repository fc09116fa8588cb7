//! Population search driver.
//!
//! Maintains a pool of distinct local optima. Each generation recombines two
//! random parents by keeping their shared nodes and a random portion of the
//! rest, repairs the child to the exact removal budget, improves it with
//! local search, and lets it compete for a pool slot under a score that
//! weighs solution quality against distance from the rest of the pool.

use rand::Rng;

use crate::budget::{Budget, SearchLog};
use crate::cbns::{cbns, random_exchange, NodeWeights};
use crate::graph::Graph;
use crate::oracle::binomial_capped;
use crate::solution::{Metric, SolutionState};
use crate::{Error, Result};

/// Search parameters. The defaults are the tuned values used throughout the
/// benchmark harness.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    /// Population size.
    pub pop_size: usize,
    /// Consecutive non-improving local-search iterations before it stops.
    pub max_no_improve: u64,
    /// Probability of inheriting each non-shared parent node.
    pub p0: f64,
    /// Weight of solution quality versus pool distance in replacement
    /// scoring.
    pub pool_beta: f64,
}

impl Default for Params {
    fn default() -> Params {
        Params {
            pop_size: 20,
            max_no_improve: 1000,
            p0: 0.85,
            pool_beta: 0.6,
        }
    }
}

/// A pool member: a sorted removal set and its objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub nodes: Vec<u32>,
    pub objective: u64,
}

/// Positions in which two equal-size sorted removal sets differ:
/// `k - |a ∩ b|`.
pub fn solution_distance(a: &[u32], b: &[u32]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    let mut shared = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() - shared
}

/// Two sorted parent sets split into the nodes they share and the symmetric
/// difference, both ascending.
pub struct BackbonePartition {
    pub common: Vec<u32>,
    pub exclusive: Vec<u32>,
}

pub fn partition_backbones(a: &[u32], b: &[u32]) -> BackbonePartition {
    let mut common = Vec::new();
    let mut exclusive = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            exclusive.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            exclusive.push(b[j]);
            j += 1;
        } else {
            common.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    BackbonePartition { common, exclusive }
}

/// Seeds an offspring set: every shared node, plus each symmetric-difference
/// node independently with probability `p0`. Coin flips happen in ascending
/// order of `exclusive`. No size repair is applied here.
pub fn merge_backbones(common: &[u32], exclusive: &[u32], p0: f64, rng: &mut impl Rng) -> Vec<u32> {
    let mut s0 = common.to_vec();
    for &x in exclusive {
        if rng.random_bool(p0) {
            s0.push(x);
        }
    }
    s0
}

/// Recombines two parents into `state`: merges their backbones, then repairs
/// to exactly `state.k()` nodes. An undersized child grows by removing a
/// random node of a random large residual component (re-evaluated after each
/// removal); an oversized child reinserts the cheapest node that is not
/// shared by both parents, so the shared backbone always survives.
pub fn double_backbone_crossover(
    state: &mut SolutionState,
    a: &Individual,
    b: &Individual,
    p0: f64,
    rng: &mut impl Rng,
    log: &mut SearchLog,
) {
    let k = state.k();
    let parts = partition_backbones(&a.nodes, &b.nodes);
    let s0 = merge_backbones(&parts.common, &parts.exclusive, p0, rng);
    state.load(&s0);

    let mut eligible: Vec<u32> = Vec::new();
    while state.s_list().len() < k {
        crate::cbns::eligible_components_into(state, &mut eligible);
        assert!(
            !eligible.is_empty(),
            "residual graph empty during underfull repair"
        );
        let c = eligible[rng.random_range(0..eligible.len())];
        let members = state.component_members(c);
        let u = members[rng.random_range(0..members.len())];
        state.move_to_s(u);
        log.step();
    }
    while state.s_list().len() > k {
        let (v, _) = state
            .argmin_reinsert_where(|u| parts.common.binary_search(&u).is_err())
            .expect("oversized child has no expendable node");
        state.move_from_s(v);
        log.step();
    }
}

/// Average ranks (1-based) of raw values sorted ascending (or descending);
/// equal values share the mean of the positions they occupy.
fn midranks(values: &[u64], descending: bool) -> Vec<f64> {
    let m = values.len();
    let mut order: Vec<usize> = (0..m).collect();
    if descending {
        order.sort_by(|&i, &j| values[j].cmp(&values[i]).then(i.cmp(&j)));
    } else {
        order.sort_by(|&i, &j| values[i].cmp(&values[j]).then(i.cmp(&j)));
    }
    let mut ranks = vec![0.0; m];
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end are 1-based ranks start+1 ..= end.
        let mid = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mid;
        }
        start = end;
    }
    ranks
}

/// Pool replacement. The offspring joins a virtual pool at index 0; every
/// member is scored by `beta * quality_rank + (1 - beta) * diversity_rank`
/// (both midranks, 1 = best: lowest objective, highest mean distance to the
/// others). The highest-scoring member leaves; ties leave the one with the
/// larger objective, then the larger index. Returns whether the offspring
/// entered the pool. A duplicate offspring is always discarded.
pub fn pool_update(pop: &mut [Individual], offspring: Individual, beta: f64) -> bool {
    if pop.iter().any(|m| m.nodes == offspring.nodes) {
        return false;
    }
    let m = pop.len() + 1;
    if m == 1 {
        return false;
    }
    let all: Vec<&Individual> = std::iter::once(&offspring).chain(pop.iter()).collect();

    let objectives: Vec<u64> = all.iter().map(|ind| ind.objective).collect();
    // Total distance to the others; the mean shares one denominator, so
    // ranking the integer sums avoids float comparisons.
    let mut dist_sums = vec![0u64; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = solution_distance(&all[i].nodes, &all[j].nodes) as u64;
            dist_sums[i] += d;
            dist_sums[j] += d;
        }
    }
    let rank_f = midranks(&objectives, false);
    let rank_d = midranks(&dist_sums, true);

    let mut worst = 0usize;
    let mut worst_score = f64::MIN;
    for i in 0..m {
        let score = beta * rank_f[i] + (1.0 - beta) * rank_d[i];
        let beats = score > worst_score
            || (score == worst_score
                && (objectives[i] > objectives[worst]
                    || (objectives[i] == objectives[worst] && i > worst)));
        if beats {
            worst = i;
            worst_score = score;
        }
    }
    if worst == 0 {
        return false;
    }
    pop[worst - 1] = offspring;
    true
}

/// Uniform random `k`-subset of `0..n`, drawn by a partial shuffle of `perm`.
fn random_subset(perm: &mut [u32], k: usize, rng: &mut impl Rng) -> Vec<u32> {
    let n = perm.len();
    for i in 0..k {
        let j = rng.random_range(i..n);
        perm.swap(i, j);
    }
    perm[..k].to_vec()
}

/// Builds up to `p_target` distinct locally optimal individuals. Duplicates
/// are perturbed by random exchanges; if a distinct solution cannot be
/// reached within `n * k` exchanges the population is returned short.
/// The first individual is always completed, so the result is never empty
/// for a valid instance.
fn init_population(
    state: &mut SolutionState,
    weights: &mut NodeWeights,
    p_target: usize,
    max_no_improve: u64,
    rng: &mut impl Rng,
    budget: &Budget,
    log: &mut SearchLog,
) -> Vec<Individual> {
    let n = state.graph().n();
    let k = state.k();
    let p_eff = binomial_capped(n, k, p_target as u128).min(p_target as u128) as usize;
    let mut pop: Vec<Individual> = Vec::with_capacity(p_eff);
    let mut perm: Vec<u32> = (0..n as u32).collect();

    for idx in 0..p_eff {
        if idx > 0
            && (budget.time_up() || log.best().is_some_and(|b| budget.target_hit(b.objective)))
        {
            break;
        }
        let sample = random_subset(&mut perm, k, rng);
        state.load(&sample);
        cbns(state, weights, max_no_improve, rng, budget, log);

        let mut nodes = state.solution();
        let perturb_cap = (n as u64).saturating_mul(k as u64);
        let mut attempts = 0u64;
        while pop.iter().any(|ind| ind.nodes == nodes) {
            if attempts >= perturb_cap || budget.time_up() {
                return pop;
            }
            random_exchange(state, rng);
            log.step();
            attempts += 1;
            nodes = state.solution();
        }
        let objective = state.objective();
        log.offer(objective, || nodes.clone());
        pop.push(Individual { nodes, objective });
    }
    pop
}

/// Result of one solver run.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub best: Individual,
    /// Objective of the first raw solution, before any improvement. The gap
    /// to `best` shows how much the search achieved beyond initialization.
    pub initial_objective: u64,
    /// Wall-clock seconds until the best solution was first reached; `None`
    /// when the run was not timed.
    pub seconds_to_best: Option<f64>,
    pub steps_to_best: u64,
    pub generations_to_best: u64,
    pub total_steps: u64,
    pub generations: u64,
    pub elapsed_seconds: Option<f64>,
    pub population_size: usize,
}

/// Full population search for the best `k`-node removal set under `metric`.
/// Runs until the budget expires; wall-clock fields are populated only when
/// the budget carries a deadline, so deadline-free runs are reproducible
/// bit for bit.
pub fn macnp(
    g: &Graph,
    k: usize,
    metric: Metric,
    params: &Params,
    rng: &mut impl Rng,
    budget: &Budget,
) -> Result<SolveOutcome> {
    if k > g.n() {
        return Err(Error::InvalidArgument(format!(
            "removal budget {k} exceeds node count {}",
            g.n()
        )));
    }
    if params.pop_size == 0 {
        return Err(Error::InvalidArgument(
            "population size must be at least 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&params.p0) {
        return Err(Error::InvalidArgument(
            "inheritance probability must be in [0, 1]".into(),
        ));
    }
    if !(0.0..=1.0).contains(&params.pool_beta) {
        return Err(Error::InvalidArgument(
            "pool score weight must be in [0, 1]".into(),
        ));
    }
    if let Metric::ComponentExcess { cap: 0 } = metric {
        return Err(Error::InvalidArgument(
            "component cap must be at least 1".into(),
        ));
    }

    let mut log = SearchLog::new(budget.has_deadline());
    let mut state = SolutionState::new(g, metric, k);
    let mut weights = NodeWeights::new(g.n());
    let mut pop = init_population(
        &mut state,
        &mut weights,
        params.pop_size,
        params.max_no_improve,
        rng,
        budget,
        &mut log,
    );

    while pop.len() >= 2 {
        let best_f = log
            .best()
            .expect("population implies an incumbent")
            .objective;
        if budget.time_up() || budget.generations_done(log.generations) || budget.target_hit(best_f)
        {
            break;
        }
        log.generations += 1;
        let i = rng.random_range(0..pop.len());
        let j = loop {
            let j = rng.random_range(0..pop.len());
            if j != i {
                break j;
            }
        };
        double_backbone_crossover(&mut state, &pop[i], &pop[j], params.p0, rng, &mut log);
        cbns(
            &mut state,
            &mut weights,
            params.max_no_improve,
            rng,
            budget,
            &mut log,
        );
        let child = Individual {
            nodes: state.solution(),
            objective: state.objective(),
        };
        pool_update(&mut pop, child, params.pool_beta);
    }

    let population_size = pop.len();
    let total_steps = log.steps;
    let generations = log.generations;
    let elapsed_seconds = log.elapsed_seconds();
    let initial_objective = log
        .first_objective
        .expect("init offers at least one solution");
    let best = log
        .into_best()
        .expect("search always evaluates at least one solution");
    Ok(SolveOutcome {
        best: Individual {
            nodes: best.nodes,
            objective: best.objective,
        },
        initial_objective,
        seconds_to_best: best.seconds,
        steps_to_best: best.at_step,
        generations_to_best: best.at_generation,
        total_steps,
        generations,
        elapsed_seconds,
        population_size,
    })
}
