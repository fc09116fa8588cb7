//! Solution representation with exact incremental objective maintenance.
//!
//! A solution is a set `S` of removed nodes. The state tracks the component
//! labeling of the residual graph, an exact member list per component, and
//! the objective under a chosen [`Metric`]. Costs are bounded by what a move
//! actually touches: removing a node discovers the parts that split off
//! without traversing the largest surviving part, and reinserting one
//! relabels only the smaller merged sides. Component labels are recycled
//! through a free list, so label-indexed arrays stay bounded by the node
//! count.

use std::io::{BufRead, Write};

use crate::graph::{ComponentLabeling, Graph, NO_COMPONENT};
use crate::{Error, Result};

/// Private marker used while rebuilding the labeling from scratch.
const UNASSIGNED: u32 = u32::MAX - 1;

/// Objective family, evaluated component by component and summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// Connected node pairs: a component of size `s` contributes `s(s-1)/2`.
    PairwiseConnectivity,
    /// Overflow above a cap: a component of size `s` contributes
    /// `max(s - cap, 0)`. Zero total means every component fits the cap.
    ComponentExcess { cap: u32 },
}

impl Metric {
    #[inline]
    pub fn component_value(self, size: u64) -> u64 {
        match self {
            Metric::PairwiseConnectivity => size * (size - 1) / 2,
            Metric::ComponentExcess { cap } => size.saturating_sub(cap as u64),
        }
    }
}

/// Connected node pairs of a labeling: sum of `s(s-1)/2` over components.
pub fn evaluate_pairwise(lab: &ComponentLabeling) -> u64 {
    lab.sizes.iter().map(|&s| s * (s - 1) / 2).sum()
}

/// Total component size overflow above `cap`. Zero iff every residual
/// component holds at most `cap` nodes. `cap` must be positive.
pub fn evaluate_excess(lab: &ComponentLabeling, cap: u32) -> Result<u64> {
    if cap == 0 {
        return Err(Error::InvalidArgument(
            "component cap must be at least 1".into(),
        ));
    }
    Ok(lab
        .sizes
        .iter()
        .map(|&s| s.saturating_sub(cap as u64))
        .sum())
}

/// One frontier of the split search in [`SolutionState::move_to_s`]. The
/// queue doubles as the visited list: nodes are appended exactly once and
/// `head` marks the processed prefix.
#[derive(Default)]
struct SplitSearch {
    queue: Vec<u32>,
    head: usize,
}

/// Residual-graph state for one solution under construction.
///
/// `label[u]` is the component of node `u`, or [`NO_COMPONENT`] while `u` is
/// removed. Sizes, liveness, and an exact member list are tracked per label.
/// `k` records the intended removal budget; the move operations do not
/// enforce it (the search holds `K + 1` nodes transiently and crossover
/// repair more), callers do.
pub struct SolutionState<'g> {
    g: &'g Graph,
    metric: Metric,
    k: usize,
    label: Vec<u32>,
    s_list: Vec<u32>,
    s_pos: Vec<u32>,
    size: Vec<u64>,
    members: Vec<Vec<u32>>,
    member_pos: Vec<u32>,
    live: Vec<u32>,
    live_pos: Vec<u32>,
    free: Vec<u32>,
    stamp: Vec<u64>,
    clock: u64,
    node_stamp: Vec<u64>,
    node_clock: u64,
    owner: Vec<u32>,
    searches: Vec<SplitSearch>,
    dsu: Vec<u32>,
    pending: Vec<u32>,
    root_done: Vec<bool>,
    queue: Vec<u32>,
    adj_labels: Vec<u32>,
    objective: u64,
}

/// Union-find root with path halving over a search-indexed parent array.
#[inline]
fn find(dsu: &mut [u32], mut x: u32) -> u32 {
    while dsu[x as usize] != x {
        dsu[x as usize] = dsu[dsu[x as usize] as usize];
        x = dsu[x as usize];
    }
    x
}

impl<'g> SolutionState<'g> {
    /// Fresh state with an empty removal set.
    pub fn new(g: &'g Graph, metric: Metric, k: usize) -> SolutionState<'g> {
        let n = g.n();
        let mut state = SolutionState {
            g,
            metric,
            k,
            label: vec![UNASSIGNED; n],
            s_list: Vec::new(),
            s_pos: vec![0; n],
            size: Vec::new(),
            members: Vec::new(),
            member_pos: vec![0; n],
            live: Vec::new(),
            live_pos: Vec::new(),
            free: Vec::new(),
            stamp: Vec::new(),
            clock: 0,
            node_stamp: vec![0; n],
            node_clock: 0,
            owner: vec![0; n],
            searches: Vec::new(),
            dsu: Vec::new(),
            pending: Vec::new(),
            root_done: Vec::new(),
            queue: Vec::new(),
            adj_labels: Vec::new(),
            objective: 0,
        };
        state.load(&[]);
        state
    }

    /// Rebuilds the labeling and objective from scratch for the removal set
    /// `s`. Panics on out-of-range or duplicate ids.
    pub fn load(&mut self, s: &[u32]) {
        let g = self.g;
        let n = g.n();
        self.label.fill(UNASSIGNED);
        self.s_list.clear();
        self.size.clear();
        for m in &mut self.members {
            m.clear();
        }
        self.live.clear();
        self.live_pos.clear();
        self.free.clear();
        self.stamp.clear();
        self.clock = 0;
        self.node_stamp.fill(0);
        self.node_clock = 0;
        self.objective = 0;

        for &u in s {
            assert!((u as usize) < n, "node {u} out of range");
            assert_ne!(
                self.label[u as usize], NO_COMPONENT,
                "duplicate node {u} in solution"
            );
            self.label[u as usize] = NO_COMPONENT;
            self.s_pos[u as usize] = self.s_list.len() as u32;
            self.s_list.push(u);
        }
        for start in 0..n as u32 {
            if self.label[start as usize] != UNASSIGNED {
                continue;
            }
            let l = self.alloc_label();
            self.label[start as usize] = l;
            self.member_push(l, start);
            self.queue.clear();
            self.queue.push(start);
            let mut head = 0;
            let mut count = 0u64;
            while head < self.queue.len() {
                let x = self.queue[head];
                head += 1;
                count += 1;
                for &y in g.neighbors(x) {
                    if self.label[y as usize] == UNASSIGNED {
                        self.label[y as usize] = l;
                        self.member_push(l, y);
                        self.queue.push(y);
                    }
                }
            }
            self.size[l as usize] = count;
            self.objective += self.metric.component_value(count);
        }
    }

    #[inline]
    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    #[inline]
    pub fn metric(&self) -> Metric {
        self.metric
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn objective(&self) -> u64 {
        self.objective
    }

    /// Removed nodes in insertion order.
    #[inline]
    pub fn s_list(&self) -> &[u32] {
        &self.s_list
    }

    /// Removed nodes, sorted. This is the canonical signature of a solution.
    pub fn solution(&self) -> Vec<u32> {
        let mut v = self.s_list.clone();
        v.sort_unstable();
        v
    }

    #[inline]
    pub fn is_removed(&self, u: u32) -> bool {
        self.label[u as usize] == NO_COMPONENT
    }

    /// Live component labels, in bookkeeping order.
    #[inline]
    pub fn live_labels(&self) -> &[u32] {
        &self.live
    }

    #[inline]
    pub fn component_size(&self, label: u32) -> u64 {
        self.size[label as usize]
    }

    #[inline]
    pub fn component_label(&self, u: u32) -> u32 {
        self.label[u as usize]
    }

    /// Members of component `c`. The order is deterministic bookkeeping
    /// order, not a graph traversal order.
    #[inline]
    pub fn component_members(&self, c: u32) -> &[u32] {
        &self.members[c as usize]
    }

    fn alloc_label(&mut self) -> u32 {
        let l = match self.free.pop() {
            Some(l) => l,
            None => {
                let l = self.size.len() as u32;
                self.size.push(0);
                self.stamp.push(0);
                self.live_pos.push(0);
                self.members.push(Vec::new());
                l
            }
        };
        debug_assert!(
            self.members[l as usize].is_empty(),
            "recycled label kept members"
        );
        self.live_pos[l as usize] = self.live.len() as u32;
        self.live.push(l);
        l
    }

    fn free_label(&mut self, l: u32) {
        debug_assert!(
            self.members[l as usize].is_empty(),
            "freed label still has members"
        );
        let pos = self.live_pos[l as usize] as usize;
        debug_assert_eq!(self.live[pos], l);
        self.live.swap_remove(pos);
        if pos < self.live.len() {
            self.live_pos[self.live[pos] as usize] = pos as u32;
        }
        self.free.push(l);
    }

    #[inline]
    fn member_push(&mut self, c: u32, u: u32) {
        let list = &mut self.members[c as usize];
        self.member_pos[u as usize] = list.len() as u32;
        list.push(u);
    }

    #[inline]
    fn member_remove(&mut self, c: u32, u: u32) {
        let list = &mut self.members[c as usize];
        let pos = self.member_pos[u as usize] as usize;
        debug_assert_eq!(list[pos], u, "member list out of sync");
        list.swap_remove(pos);
        if pos < list.len() {
            self.member_pos[list[pos] as usize] = pos as u32;
        }
    }

    /// Removes `v` from the residual graph. One search per surviving neighbor
    /// runs in lockstep; searches merge when they touch, and the last set
    /// standing keeps the old label without ever being traversed. Cost is
    /// bounded by the parts that actually split off plus the degree of `v`.
    /// Panics if `v` is already removed.
    pub fn move_to_s(&mut self, v: u32) {
        let g = self.g;
        let old = self.label[v as usize];
        assert_ne!(old, NO_COMPONENT, "node {v} is already removed");
        self.label[v as usize] = NO_COMPONENT;
        self.s_pos[v as usize] = self.s_list.len() as u32;
        self.s_list.push(v);
        self.member_remove(old, v);

        let old_size = self.size[old as usize];
        self.objective -= self.metric.component_value(old_size);
        if old_size == 1 {
            self.free_label(old);
            return;
        }

        // Seed one search per neighbor still labeled `old`.
        self.node_clock += 1;
        let nc = self.node_clock;
        let mut seeds = 0usize;
        for &w in g.neighbors(v) {
            if self.label[w as usize] != old {
                continue;
            }
            let i = seeds;
            seeds += 1;
            if self.searches.len() <= i {
                self.searches.push(SplitSearch::default());
                self.dsu.push(0);
                self.pending.push(0);
                self.root_done.push(false);
            }
            self.searches[i].queue.clear();
            self.searches[i].queue.push(w);
            self.searches[i].head = 0;
            self.node_stamp[w as usize] = nc;
            self.owner[w as usize] = i as u32;
            self.dsu[i] = i as u32;
            self.pending[i] = 1;
            self.root_done[i] = false;
        }
        debug_assert!(seeds > 0, "component of size > 1 has no surviving neighbor");

        // Round-robin expansion, one node per turn. `pending` counts each
        // set's queued-but-unprocessed nodes; a set with none is complete.
        // Stop as soon as a single set remains pending: every unvisited node
        // of the old component can only belong to it.
        let mut active = seeds;
        let mut cursor = 0usize;
        while active > 1 {
            while self.searches[cursor].head >= self.searches[cursor].queue.len() {
                cursor = (cursor + 1) % seeds;
            }
            let i = cursor;
            let x = self.searches[i].queue[self.searches[i].head];
            self.searches[i].head += 1;
            let mut ri = find(&mut self.dsu, i as u32);
            self.pending[ri as usize] -= 1;
            if self.pending[ri as usize] == 0 {
                active -= 1;
            }
            for &y in g.neighbors(x) {
                if self.label[y as usize] != old {
                    continue;
                }
                if self.node_stamp[y as usize] == nc {
                    let rj = find(&mut self.dsu, self.owner[y as usize]);
                    if rj != ri {
                        let (win, lose) = if ri < rj { (ri, rj) } else { (rj, ri) };
                        let both_pending =
                            self.pending[win as usize] > 0 && self.pending[lose as usize] > 0;
                        self.dsu[lose as usize] = win;
                        self.pending[win as usize] += self.pending[lose as usize];
                        if both_pending {
                            active -= 1;
                        }
                        ri = win;
                    }
                } else {
                    self.node_stamp[y as usize] = nc;
                    self.owner[y as usize] = i as u32;
                    self.searches[i].queue.push(y);
                    if self.pending[ri as usize] == 0 {
                        active += 1;
                    }
                    self.pending[ri as usize] += 1;
                }
            }
            cursor = (cursor + 1) % seeds;
        }

        let mut survivor_root = u32::MAX;
        for i in 0..seeds {
            let r = find(&mut self.dsu, i as u32);
            if self.pending[r as usize] > 0 {
                survivor_root = r;
                break;
            }
        }
        debug_assert_ne!(
            survivor_root,
            u32::MAX,
            "split search lost its surviving set"
        );

        // Every completed set is a part that split off: move its visited
        // nodes under a fresh label. The surviving set keeps `old`.
        let mut completed_total = 0u64;
        for i in 0..seeds {
            let r = find(&mut self.dsu, i as u32);
            if r == survivor_root || self.root_done[r as usize] {
                continue;
            }
            self.root_done[r as usize] = true;
            let l = self.alloc_label();
            let mut count = 0u64;
            for j in i..seeds {
                if find(&mut self.dsu, j as u32) != r {
                    continue;
                }
                let part = std::mem::take(&mut self.searches[j].queue);
                debug_assert_eq!(self.searches[j].head, part.len(), "completed set left work");
                for &u in &part {
                    self.label[u as usize] = l;
                    self.member_remove(old, u);
                    self.member_push(l, u);
                }
                count += part.len() as u64;
                self.searches[j].queue = part;
            }
            self.size[l as usize] = count;
            self.objective += self.metric.component_value(count);
            completed_total += count;
        }

        let survivor_size = old_size - 1 - completed_total;
        debug_assert!(survivor_size >= 1, "surviving part lost all nodes");
        debug_assert_eq!(survivor_size as usize, self.members[old as usize].len());
        self.size[old as usize] = survivor_size;
        self.objective += self.metric.component_value(survivor_size);
    }

    /// Puts `u` back into the residual graph, merging the components adjacent
    /// to it. The smaller merged parts are relabeled into the largest one
    /// (ties keep the smaller label) via their member lists, so cost is
    /// bounded by the smaller sides. Panics if `u` is not removed.
    pub fn move_from_s(&mut self, u: u32) {
        let g = self.g;
        assert_eq!(
            self.label[u as usize], NO_COMPONENT,
            "node {u} is not removed"
        );
        let pos = self.s_pos[u as usize] as usize;
        assert!(
            pos < self.s_list.len() && self.s_list[pos] == u,
            "node {u} is not in S"
        );
        self.s_list.swap_remove(pos);
        if pos < self.s_list.len() {
            self.s_pos[self.s_list[pos] as usize] = pos as u32;
        }

        self.clock += 1;
        let clock = self.clock;
        let mut merged = 1u64;
        let mut removed_value = 0u64;
        let mut survivor: Option<u32> = None;
        let mut labels = std::mem::take(&mut self.adj_labels);
        labels.clear();
        for &w in g.neighbors(u) {
            let l = self.label[w as usize];
            if l == NO_COMPONENT || self.stamp[l as usize] == clock {
                continue;
            }
            self.stamp[l as usize] = clock;
            labels.push(l);
            let s = self.size[l as usize];
            merged += s;
            removed_value += self.metric.component_value(s);
            survivor = Some(match survivor {
                None => l,
                Some(b) => {
                    let bs = self.size[b as usize];
                    if s > bs || (s == bs && l < b) {
                        l
                    } else {
                        b
                    }
                }
            });
        }

        match survivor {
            None => {
                let l = self.alloc_label();
                self.label[u as usize] = l;
                self.member_push(l, u);
                self.size[l as usize] = 1;
                self.objective += self.metric.component_value(1);
            }
            Some(keep) => {
                for &d in &labels {
                    if d == keep {
                        continue;
                    }
                    let mut part = std::mem::take(&mut self.members[d as usize]);
                    debug_assert_eq!(part.len() as u64, self.size[d as usize]);
                    for &x in &part {
                        self.label[x as usize] = keep;
                        self.member_push(keep, x);
                    }
                    part.clear();
                    self.members[d as usize] = part;
                    self.free_label(d);
                }
                self.label[u as usize] = keep;
                self.member_push(keep, u);
                self.size[keep as usize] = merged;
                self.objective -= removed_value;
                self.objective += self.metric.component_value(merged);
            }
        }
        self.adj_labels = labels;
    }

    /// Objective change if `u` were reinserted right now: the adjacent
    /// components and `u` fuse into one of size `1 + sum of their sizes`.
    /// Costs one pass over the adjacency of `u`. Panics if `u` is not removed.
    pub fn delta_reinsert(&mut self, u: u32) -> i64 {
        let g = self.g;
        assert_eq!(
            self.label[u as usize], NO_COMPONENT,
            "node {u} is not removed"
        );
        self.clock += 1;
        let clock = self.clock;
        let mut merged = 1u64;
        let mut removed_value = 0u64;
        for &w in g.neighbors(u) {
            let l = self.label[w as usize];
            if l == NO_COMPONENT || self.stamp[l as usize] == clock {
                continue;
            }
            self.stamp[l as usize] = clock;
            let s = self.size[l as usize];
            merged += s;
            removed_value += self.metric.component_value(s);
        }
        self.metric.component_value(merged) as i64 - removed_value as i64
    }

    /// Member of `S` whose reinsertion increases the objective least,
    /// restricted to nodes accepted by `keep`; ties break toward the smallest
    /// id. `None` when no member qualifies.
    pub fn argmin_reinsert_where(&mut self, keep: impl Fn(u32) -> bool) -> Option<(u32, i64)> {
        let mut best: Option<(u32, i64)> = None;
        for i in 0..self.s_list.len() {
            let u = self.s_list[i];
            if !keep(u) {
                continue;
            }
            let d = self.delta_reinsert(u);
            best = Some(match best {
                None => (u, d),
                Some((bu, bd)) => {
                    if d < bd || (d == bd && u < bu) {
                        (u, d)
                    } else {
                        (bu, bd)
                    }
                }
            });
        }
        best
    }

    /// Unrestricted [`Self::argmin_reinsert_where`]. Panics if `S` is empty.
    pub fn argmin_reinsert(&mut self) -> (u32, i64) {
        self.argmin_reinsert_where(|_| true)
            .expect("argmin over empty S")
    }
}

/// Writes a solution file: one line `K f`, then the node ids one per line.
pub fn write_solution(w: &mut impl Write, nodes: &[u32], objective: u64) -> std::io::Result<()> {
    writeln!(w, "{} {}", nodes.len(), objective)?;
    for u in nodes {
        writeln!(w, "{u}")?;
    }
    Ok(())
}

/// Reads a solution file written by [`write_solution`]. Ids may be spread
/// over any whitespace; comment lines (`#`) are allowed.
pub fn read_solution(reader: impl BufRead) -> Result<(Vec<u32>, u64)> {
    let mut tokens: Vec<String> = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim_start().starts_with('#') {
            continue;
        }
        for t in line.split_whitespace() {
            tokens.push(t.to_string());
        }
    }
    if tokens.len() < 2 {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header \"K f\"".into(),
        });
    }
    let k: usize = tokens[0].parse().map_err(|_| Error::Parse {
        line: 1,
        msg: format!("invalid size {:?}", tokens[0]),
    })?;
    let f: u64 = tokens[1].parse().map_err(|_| Error::Parse {
        line: 1,
        msg: format!("invalid objective {:?}", tokens[1]),
    })?;
    let ids = &tokens[2..];
    if ids.len() != k {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header declares {k} ids, found {}", ids.len()),
        });
    }
    let mut nodes = Vec::with_capacity(k);
    for t in ids {
        let u: u32 = t.parse().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("invalid node id {t:?}"),
        })?;
        nodes.push(u);
    }
    Ok((nodes, f))
}
