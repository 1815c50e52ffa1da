//! Spectral and extremal analysis of signed graphs.
//!
//! A signed graph is a simple graph whose edges carry a sign in `{+1, -1}`.
//! Signs behave multiplicatively along cycles: a cycle is positive when it
//! has an even number of negative edges, and a signed graph is *balanced*
//! when every cycle is positive. Switching (flipping the signs of all edges
//! across a vertex cut) preserves cycle signs and adjacency spectra, so the
//! natural objects of study are switching classes rather than individual
//! sign assignments.
//!
//! This crate provides:
//!
//! - [`graph`]: the [`SignedGraph`] type, switching, negation, canonical
//!   switching representatives, and switching isomorphism for small
//!   orders;
//! - [`invariants`]: balance with verifiable certificates, negative girth,
//!   clique and balanced-clique numbers, and detection of unbalanced
//!   complete subgraphs;
//! - [`spectra`]: a self-contained symmetric eigensolver, exact integer
//!   characteristic polynomials, equitable-partition quotient matrices, and
//!   root isolation for integer polynomials;
//! - [`constructions`]: the named extremal candidates (a complete graph
//!   with a pendant-like distinguished vertex attached by one negative and
//!   several positive edges, Turán graphs, homogeneous complete graphs);
//! - [`perturb`]: index-monotone edge perturbations with equality
//!   diagnostics driven by the leading eigenvector;
//! - [`search`]: exhaustive enumeration of switching classes at small order
//!   and extremal reports (maximum edge count and maximum index over
//!   unbalanced classes avoiding a forbidden family).
//!
//! The `sgext` binary exposes all of the above behind a scriptable CLI with
//! deterministic JSON output; see the repository README.

pub mod constructions;
pub mod graph;
pub mod invariants;
pub mod perm;
pub mod perturb;
pub mod random;
pub mod search;
pub mod sg1;
pub mod spectra;

pub use graph::{SignedGraph, SignedMatrix, SwitchSet};
pub use spectra::{IntMatrix, IntPolynomial, Partition, Spectrum};

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("loop at vertex {0} is not allowed")]
    LoopEdge(usize),
    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge sign must be +1 or -1, got {0}")]
    InvalidSign(i8),
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error(
        "partition is not equitable: rows of block {block_row} over block {block_col} \
         have unequal sums (vertex {vertex_a}: {sum_a}, vertex {vertex_b}: {sum_b})"
    )]
    NotEquitable {
        block_row: usize,
        block_col: usize,
        vertex_a: usize,
        sum_a: i64,
        vertex_b: usize,
        sum_b: i64,
    },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("no sign change isolated in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("perturbation precondition failed ({kind}): {msg}")]
    Perturbation { kind: &'static str, msg: String },
    #[error("SG1 parse error at line {line}: {msg}")]
    Sg1Parse { line: usize, msg: String },
    #[error("scan cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
