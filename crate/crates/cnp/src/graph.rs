//! Undirected graphs in compressed adjacency form, plus residual-component
//! labeling.
//!
//! The on-disk format is a plain edge list: optional comment lines starting
//! with `#` or a lone `c` token, one header line `n m`, then `m` lines `u v`.
//! Ids are zero-based by default; parsing is tolerant of duplicate edges
//! (collapsed) and, unless strict mode is on, of self-loops (dropped).

use std::io::{BufRead, Write};

use crate::{Error, Result};

/// Label given to nodes that are currently removed from the residual graph.
pub const NO_COMPONENT: u32 = u32::MAX;

/// Undirected simple graph over nodes `0..n`.
///
/// Adjacency lives in one contiguous array sliced by per-node offsets; each
/// neighbor list is sorted and duplicate-free, and self-loops are never
/// stored. Nodes are `u32`, so traversals touch compact memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an edge list, deduplicating as it goes.
    ///
    /// Panics if an endpoint is out of range or an edge is a self-loop; the
    /// parser filters both before calling in here.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Graph {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            assert!(
                (u as usize) < n && (v as usize) < n,
                "edge endpoint out of range"
            );
            assert_ne!(u, v, "self-loop");
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut neighbors = vec![0u32; acc];
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        for &(u, v) in edges {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        let mut g = Graph { offsets, neighbors };
        g.sort_dedup();
        g
    }

    fn sort_dedup(&mut self) {
        let n = self.n();
        let mut compact = Vec::with_capacity(self.neighbors.len());
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for u in 0..n {
            let (lo, hi) = (self.offsets[u], self.offsets[u + 1]);
            let mut list = self.neighbors[lo..hi].to_vec();
            list.sort_unstable();
            list.dedup();
            compact.extend_from_slice(&list);
            offsets.push(compact.len());
        }
        self.offsets = offsets;
        self.neighbors = compact;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, u: u32) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    #[inline]
    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.neighbors[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    /// Density measure `2m / (n (n + 1))`.
    pub fn sparsity(&self) -> f64 {
        let n = self.n() as f64;
        if n == 0.0 {
            return 0.0;
        }
        2.0 * self.m() as f64 / (n * (n + 1.0))
    }

    /// Writes the graph back out in the same edge-list format the parser
    /// accepts, each edge once with its smaller endpoint first.
    pub fn write_edge_list(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n(), self.m())?;
        for u in 0..self.n() as u32 {
            for &v in self.neighbors(u) {
                if u < v {
                    writeln!(w, "{u} {v}")?;
                }
            }
        }
        Ok(())
    }
}

/// Knobs for [`load_graph`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Treat ids in the file as `1..=n` and shift them down.
    pub one_indexed: bool,
    /// Reject self-loops instead of dropping them.
    pub strict: bool,
}

/// A parsed graph plus counters for the repairs the parser applied.
#[derive(Debug)]
pub struct Parsed {
    pub graph: Graph,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

fn is_comment(line: &str) -> bool {
    let t = line.trim_start();
    t.starts_with('#') || t == "c" || t.starts_with("c ") || t.starts_with("c\t")
}

fn parse_id(tok: &str, line: usize, n: usize, one_indexed: bool) -> Result<u32> {
    let raw: i64 = tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid node id {tok:?}"),
    })?;
    let (lo, hi) = if one_indexed {
        (1i64, n as i64)
    } else {
        (0i64, n as i64 - 1)
    };
    if raw < lo || raw > hi {
        return Err(Error::NodeRange {
            line,
            id: raw,
            range: format!("{lo}..={hi}"),
        });
    }
    Ok(if one_indexed {
        (raw - 1) as u32
    } else {
        raw as u32
    })
}

/// Parses an edge-list graph from a buffered reader.
///
/// The header `n m` declares the node count and the number of edge lines that
/// follow; a deviating edge-line count is a parse error. Duplicate edges are
/// collapsed silently and self-loops dropped (both counted in [`Parsed`]),
/// except that strict mode turns self-loops into errors.
pub fn load_graph(reader: impl BufRead, opts: &ParseOptions) -> Result<Parsed> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut self_loops = 0usize;
    let mut lineno = 0usize;

    for line in reader.lines() {
        lineno += 1;
        let line = line?;
        if line.trim().is_empty() || is_comment(&line) {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match header {
            None => {
                if toks.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected header \"n m\", got {line:?}"),
                    });
                }
                let n: usize = toks[0].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid node count {:?}", toks[0]),
                })?;
                let m: usize = toks[1].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid edge count {:?}", toks[1]),
                })?;
                header = Some((n, m));
                edges.reserve(m);
            }
            Some((n, m)) => {
                if toks.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected edge \"u v\", got {line:?}"),
                    });
                }
                if edges.len() + self_loops == m {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("more than the declared {m} edge lines"),
                    });
                }
                let u = parse_id(toks[0], lineno, n, opts.one_indexed)?;
                let v = parse_id(toks[1], lineno, n, opts.one_indexed)?;
                if u == v {
                    if opts.strict {
                        return Err(Error::SelfLoop { line: lineno, u });
                    }
                    self_loops += 1;
                    continue;
                }
                edges.push((u, v));
            }
        }
    }

    let (n, m) = header.ok_or(Error::Parse {
        line: lineno,
        msg: "missing header".into(),
    })?;
    if edges.len() + self_loops != m {
        return Err(Error::Parse {
            line: lineno,
            msg: format!(
                "declared {m} edge lines, found {}",
                edges.len() + self_loops
            ),
        });
    }
    let graph = Graph::from_edges(n, &edges);
    let duplicates_collapsed = edges.len() - graph.m();
    Ok(Parsed {
        graph,
        self_loops_dropped: self_loops,
        duplicates_collapsed,
    })
}

/// Convenience wrapper opening `path` for [`load_graph`].
pub fn load_graph_path(path: &std::path::Path, opts: &ParseOptions) -> Result<Parsed> {
    let file = std::fs::File::open(path)?;
    load_graph(std::io::BufReader::new(file), opts)
}

/// Connected components of a residual graph: one compact label per surviving
/// node, [`NO_COMPONENT`] for removed ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub label: Vec<u32>,
    pub sizes: Vec<u64>,
}

impl ComponentLabeling {
    #[inline]
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Labels the connected components of `g` restricted to nodes with
/// `removed[u] == false`. Runs in `O(n + m)` with an iterative traversal,
/// labels numbered `0..count` in order of their smallest node id.
pub fn components_of(g: &Graph, removed: &[bool]) -> ComponentLabeling {
    let n = g.n();
    assert_eq!(removed.len(), n, "mask length must match node count");
    let mut label = vec![NO_COMPONENT; n];
    let mut sizes = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    let mut visited = vec![false; n];

    for start in 0..n {
        if removed[start] || visited[start] {
            continue;
        }
        let id = sizes.len() as u32;
        let mut size = 0u64;
        visited[start] = true;
        stack.push(start as u32);
        while let Some(u) = stack.pop() {
            label[u as usize] = id;
            size += 1;
            for &v in g.neighbors(u) {
                if !removed[v as usize] && !visited[v as usize] {
                    visited[v as usize] = true;
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    ComponentLabeling { label, sizes }
}
