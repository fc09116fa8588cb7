//! Run control: stopping conditions and incumbent tracking.
//!
//! A [`Budget`] is a set of optional limits, any of which ends the search; a
//! [`SearchLog`] counts work and remembers the best solution seen. Wall-clock
//! readings are optional so that runs limited by generation count alone can
//! produce bit-identical reports.

use std::time::{Duration, Instant};

/// Stopping conditions, combined as "stop at the first one hit".
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
    max_generations: Option<u64>,
    target: Option<u64>,
}

impl Budget {
    /// No limits: the caller must rely on a target or generation cap added
    /// later, or on the search's own stopping logic.
    pub fn none() -> Budget {
        Budget::default()
    }

    /// Stop once `limit` has elapsed, counted from this call.
    pub fn with_time_limit(mut self, limit: Duration) -> Budget {
        self.deadline = Some(Instant::now() + limit);
        self
    }

    /// Stop after `generations` crossover generations.
    pub fn with_generations(mut self, generations: u64) -> Budget {
        self.max_generations = Some(generations);
        self
    }

    /// Stop as soon as the incumbent objective is `target` or better.
    pub fn with_target(mut self, target: u64) -> Budget {
        self.target = Some(target);
        self
    }

    #[inline]
    pub fn target(&self) -> Option<u64> {
        self.target
    }

    #[inline]
    pub fn has_deadline(&self) -> bool {
        self.deadline.is_some()
    }

    #[inline]
    pub fn time_up(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    #[inline]
    pub fn target_hit(&self, objective: u64) -> bool {
        self.target.is_some_and(|t| objective <= t)
    }

    #[inline]
    pub fn generations_done(&self, generations: u64) -> bool {
        self.max_generations.is_some_and(|m| generations >= m)
    }
}

/// Best solution seen so far, with the work counters at the moment it was
/// found. `seconds` is `None` when the log does not record wall-clock time.
#[derive(Clone, Debug)]
pub struct Incumbent {
    /// Removed nodes, sorted.
    pub nodes: Vec<u32>,
    pub objective: u64,
    pub seconds: Option<f64>,
    pub at_step: u64,
    pub at_generation: u64,
}

/// Work counters and incumbent for one search run.
///
/// A step is one solution-changing move sequence (an exchange during local
/// search, a perturbation exchange, or a repair move during crossover).
pub struct SearchLog {
    started: Instant,
    record_time: bool,
    pub steps: u64,
    pub generations: u64,
    /// Objective of the very first solution offered, before any improvement.
    pub first_objective: Option<u64>,
    best: Option<Incumbent>,
}

impl SearchLog {
    pub fn new(record_time: bool) -> SearchLog {
        SearchLog {
            started: Instant::now(),
            record_time,
            steps: 0,
            generations: 0,
            first_objective: None,
            best: None,
        }
    }

    #[inline]
    pub fn step(&mut self) {
        self.steps += 1;
    }

    /// Elapsed wall-clock time, or `None` for time-blind logs.
    pub fn elapsed_seconds(&self) -> Option<f64> {
        self.record_time
            .then(|| self.started.elapsed().as_secs_f64())
    }

    /// Records the solution if it is strictly better than the incumbent.
    /// `make_nodes` is only called when it is. Returns whether it was kept.
    pub fn offer(&mut self, objective: u64, make_nodes: impl FnOnce() -> Vec<u32>) -> bool {
        if self.first_objective.is_none() {
            self.first_objective = Some(objective);
        }
        let better = self.best.as_ref().is_none_or(|b| objective < b.objective);
        if better {
            let mut nodes = make_nodes();
            nodes.sort_unstable();
            self.best = Some(Incumbent {
                nodes,
                objective,
                seconds: self.elapsed_seconds(),
                at_step: self.steps,
                at_generation: self.generations,
            });
        }
        better
    }

    #[inline]
    pub fn best(&self) -> Option<&Incumbent> {
        self.best.as_ref()
    }

    pub fn into_best(self) -> Option<Incumbent> {
        self.best
    }
}
