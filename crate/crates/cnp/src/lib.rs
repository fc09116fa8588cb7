//! Critical node detection for sparse graphs.
//!
//! Given an undirected graph and a removal budget `K`, the solver looks for a
//! set `S` of `K` nodes whose deletion minimizes the number of connected node
//! pairs in the residual graph. A second objective, the total component size
//! overflow above a cap `W`, turns the same machinery into a solver for the
//! cardinality-constrained variant: find the smallest `K` admitting a residual
//! graph whose components all hold at most `W` nodes.
//!
//! The search is a memetic algorithm: a small population of solutions improved
//! by component-based neighborhood search, recombined with a double-backbone
//! crossover, and curated by a rank-based pool rule that trades off quality
//! against population diversity. All stochastic choices flow through a single
//! seeded RNG per trial, so runs are reproducible.

pub mod budget;
pub mod campaign;
pub mod cbns;
pub mod cccnp;
pub mod graph;
pub mod kbv;
pub mod memetic;
pub mod oracle;
pub mod report;
pub mod signtest;
pub mod solution;

pub use budget::{Budget, SearchLog};
pub use graph::{components_of, load_graph, ComponentLabeling, Graph, ParseOptions};
pub use memetic::{macnp, Individual, Params, SolveOutcome};
pub use solution::{Metric, SolutionState};

/// Errors surfaced by parsing, validation, and the search drivers.
///
/// Contract violations (moving a node that is already removed, evaluating a
/// reinsertion for a node outside `S`) are programming errors and panic
/// instead of returning a variant.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: node id {id} outside declared range ({range})")]
    NodeRange { line: usize, id: i64, range: String },
    #[error("line {line}: self-loop on node {u}")]
    SelfLoop { line: usize, u: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("subset space too large: C({n}, {k}) exceeds {limit}")]
    SearchSpaceTooLarge { n: usize, k: usize, limit: u64 },
}

/// Shorthand for results carrying [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
