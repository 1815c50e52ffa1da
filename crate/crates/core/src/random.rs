//! Seeded random graphs for trial harnesses and property checks.

use crate::graph::{SignedGraph, SwitchSet};
use rand::Rng;

/// Erdős–Rényi style signed graph: each pair becomes an edge with
/// probability `edge_prob`, signs uniform.
pub fn random_signed_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, edge_prob: f64) -> SignedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(edge_prob) {
                let sign = if rng.random_bool(0.5) { 1 } else { -1 };
                edges.push((u, v, sign));
            }
        }
    }
    SignedGraph::new(n, &edges).expect("randomly sampled edges are valid")
}

/// Uniformly random subset of the vertex set.
pub fn random_switch_set<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SwitchSet {
    (0..n).filter(|_| rng.random_bool(0.5)).collect()
}
