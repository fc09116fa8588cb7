//! Component-based local search over fixed-size removal sets.
//!
//! One iteration removes a node chosen from a large residual component and
//! reinserts the cheapest member of the enlarged removal set, so the set size
//! is restored after every exchange. Node weights steer removal toward nodes
//! that have sat in large components for many iterations; they are reset at
//! the start of every run and zeroed for a node whenever it is reinserted.

use rand::Rng;

use crate::budget::{Budget, SearchLog};
use crate::solution::SolutionState;

/// Per-node selection weights for the removal step.
pub struct NodeWeights {
    w: Vec<u64>,
}

impl NodeWeights {
    pub fn new(n: usize) -> NodeWeights {
        NodeWeights { w: vec![0; n] }
    }

    pub fn reset(&mut self) {
        self.w.fill(0);
    }

    #[inline]
    pub fn get(&self, u: u32) -> u64 {
        self.w[u as usize]
    }

    #[inline]
    pub fn zero(&mut self, u: u32) {
        self.w[u as usize] = 0;
    }

    #[inline]
    fn bump(&mut self, u: u32) {
        self.w[u as usize] += 1;
    }
}

/// Labels of the components eligible for the removal step: those strictly
/// larger than the mean of the extreme sizes. When every component has the
/// same size nothing is strictly larger, so all maximum-size components
/// qualify instead.
pub(crate) fn eligible_components_into(state: &SolutionState, out: &mut Vec<u32>) {
    out.clear();
    let live = state.live_labels();
    if live.is_empty() {
        return;
    }
    let mut max = 0u64;
    let mut min = u64::MAX;
    for &l in live {
        let s = state.component_size(l);
        max = max.max(s);
        min = min.min(s);
    }
    let threshold = (max + min) / 2;
    out.extend(
        live.iter()
            .copied()
            .filter(|&l| state.component_size(l) > threshold),
    );
    if out.is_empty() {
        out.extend(
            live.iter()
                .copied()
                .filter(|&l| state.component_size(l) == max),
        );
    }
}

/// Picks the removal node: a random eligible component, then its member with
/// the maximum weight, ties by maximum degree, then smallest id. Every other
/// member of that component gets its weight bumped. Returns `None` when the
/// residual graph is empty.
fn select_removal_node(
    state: &SolutionState,
    weights: &mut NodeWeights,
    rng: &mut impl Rng,
    eligible: &mut Vec<u32>,
) -> Option<u32> {
    eligible_components_into(state, eligible);
    if eligible.is_empty() {
        return None;
    }
    let c = eligible[rng.random_range(0..eligible.len())];
    let members = state.component_members(c);
    let g = state.graph();
    let mut best = members[0];
    for &u in members.iter().skip(1) {
        let better = match weights.get(u).cmp(&weights.get(best)) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => match g.degree(u).cmp(&g.degree(best)) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => u < best,
            },
        };
        if better {
            best = u;
        }
    }
    for &u in members.iter() {
        if u != best {
            weights.bump(u);
        }
    }
    Some(best)
}

/// Runs weighted exchange local search until `max_no_improve` consecutive
/// iterations fail to improve, the budget expires, or the target is reached.
/// On return the state holds the best solution found during the run; every
/// improvement is also offered to `log`.
pub fn cbns(
    state: &mut SolutionState,
    weights: &mut NodeWeights,
    max_no_improve: u64,
    rng: &mut impl Rng,
    budget: &Budget,
    log: &mut SearchLog,
) {
    weights.reset();
    let mut best = state.solution();
    let mut best_f = state.objective();
    log.offer(best_f, || best.clone());
    if budget.target_hit(best_f) {
        return;
    }
    // An empty removal set admits no exchange: removing and reinserting the
    // same node is the only option.
    if state.s_list().is_empty() {
        return;
    }

    let mut eligible: Vec<u32> = Vec::new();
    let mut state_is_best = true;
    let mut idle = 0u64;
    while idle < max_no_improve {
        if budget.time_up() {
            break;
        }
        let Some(u) = select_removal_node(state, weights, rng, &mut eligible) else {
            break;
        };
        state.move_to_s(u);
        let (v, _) = state.argmin_reinsert();
        state.move_from_s(v);
        weights.zero(v);
        log.step();

        if state.objective() < best_f {
            best_f = state.objective();
            best = state.solution();
            state_is_best = true;
            idle = 0;
            log.offer(best_f, || best.clone());
            if budget.target_hit(best_f) {
                break;
            }
        } else {
            state_is_best = false;
            idle += 1;
        }
    }
    if !state_is_best {
        state.load(&best);
    }
}

/// One uniformly random exchange: removes a random residual node and
/// reinserts a random other member of the removal set. Keeps the set size and
/// guarantees the set actually changes. Returns `false` when no exchange is
/// possible (empty removal set or empty residual graph).
pub fn random_exchange(state: &mut SolutionState, rng: &mut impl Rng) -> bool {
    let n = state.graph().n();
    let k_now = state.s_list().len();
    if k_now == 0 || k_now >= n {
        return false;
    }
    let u = loop {
        let c = rng.random_range(0..n) as u32;
        if !state.is_removed(c) {
            break c;
        }
    };
    state.move_to_s(u);
    let m = state.s_list().len();
    let v = loop {
        let w = state.s_list()[rng.random_range(0..m)];
        if w != u {
            break w;
        }
    };
    state.move_from_s(v);
    true
}
