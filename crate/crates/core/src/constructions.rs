//! Named signed graphs used as extremal candidates and test fixtures.

use crate::{Error, Result, SignedGraph};

/// The extremal candidate on parameters `(n, r)`: an all-positive complete
/// graph on vertices `1..n` together with vertex 0 joined to vertex 1 by a
/// negative edge and to vertices `2..r` by positive edges.
///
/// The result is unbalanced, avoids every unbalanced complete subgraph on
/// `r + 1` vertices, and has `n(n-1)/2 - (n-r)` edges.
pub fn gamma_construction(n: usize, r: usize) -> Result<SignedGraph> {
    if !(3..=n.saturating_sub(1)).contains(&r) {
        return Err(Error::ParameterRange(format!(
            "gamma construction requires 3 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    let mut edges: Vec<(usize, usize, i8)> = vec![(0, 1, -1)];
    edges.extend((2..r).map(|v| (0, v, 1)));
    for u in 1..n {
        for v in u + 1..n {
            edges.push((u, v, 1));
        }
    }
    SignedGraph::new(n, &edges)
}

/// The all-positive Turán graph: complete `r`-partite with part sizes as
/// equal as possible. Returns the graph together with its edge count.
pub fn turan_graph(n: usize, r: usize) -> Result<(SignedGraph, usize)> {
    if r == 0 {
        return Err(Error::ParameterRange("turan graph requires r >= 1".into()));
    }
    // first (n mod r) parts get the larger size
    let q = n / r;
    let rem = n % r;
    let mut part = Vec::with_capacity(n);
    for i in 0..r {
        let size = if i < rem { q + 1 } else { q };
        for _ in 0..size {
            part.push(i);
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if part[u] != part[v] {
                edges.push((u, v, 1));
            }
        }
    }
    let count = edges.len();
    Ok((SignedGraph::new(n, &edges)?, count))
}

/// Homogeneous complete graph: every pair adjacent with the given sign.
pub fn complete(n: usize, sign: i8) -> Result<SignedGraph> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidSign(sign));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, sign));
        }
    }
    SignedGraph::new(n, &edges)
}

/// Canonical unbalanced complete graph of order `k >= 3`: all-positive
/// `K_k` with the single edge `{0, 1}` negative.
pub fn unbalanced_complete(k: usize) -> Result<SignedGraph> {
    if k < 3 {
        return Err(Error::ParameterRange(format!(
            "no unbalanced complete graph exists on {k} vertices"
        )));
    }
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            let s = if (u, v) == (0, 1) { -1 } else { 1 };
            edges.push((u, v, s));
        }
    }
    SignedGraph::new(k, &edges)
}
