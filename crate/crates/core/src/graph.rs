//! Signed graphs: representation, switching, negation, and canonical
//! switching representatives.
//!
//! Vertices are labeled `0..n`. Edges are stored both as a sorted list of
//! `(u, v, sign)` triples with `u < v` and as an `n x n` sign lookup table,
//! so adjacency queries are O(1) during enumeration. Values are immutable
//! after construction; every operation returns a fresh graph.

use crate::perm::visit_permutations;
use crate::{Error, Result};
use std::collections::BTreeSet;

/// A simple graph with a sign in `{+1, -1}` on every edge.
#[derive(Debug, Clone)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<(usize, usize, i8)>,
    adj: Vec<i8>,
}

impl PartialEq for SignedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for SignedGraph {}

impl std::hash::Hash for SignedGraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.edges.hash(state);
    }
}

impl SignedGraph {
    /// Builds a signed graph on `n` vertices from `(u, v, sign)` triples.
    ///
    /// Endpoint pairs are normalized to `u < v`; loops, duplicate pairs,
    /// out-of-range endpoints, and signs outside `{+1, -1}` are rejected.
    pub fn new(n: usize, edges: &[(usize, usize, i8)]) -> Result<Self> {
        let mut adj = vec![0i8; n * n];
        let mut list = Vec::with_capacity(edges.len());
        for &(a, b, s) in edges {
            if a >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: a,
                    order: n,
                });
            }
            if b >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: b,
                    order: n,
                });
            }
            if a == b {
                return Err(Error::LoopEdge(a));
            }
            if s != 1 && s != -1 {
                return Err(Error::InvalidSign(s));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if adj[u * n + v] != 0 {
                return Err(Error::DuplicateEdge { u, v });
            }
            adj[u * n + v] = s;
            adj[v * n + u] = s;
            list.push((u, v, s));
        }
        list.sort_unstable();
        Ok(SignedGraph {
            n,
            edges: list,
            adj,
        })
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of negative edges.
    pub fn negative_edge_count(&self) -> usize {
        self.edges.iter().filter(|&&(_, _, s)| s < 0).count()
    }

    /// Sign of the edge `{u, v}`, or 0 when the pair is not adjacent.
    ///
    /// Panics when an endpoint is out of range.
    pub fn sign(&self, u: usize, v: usize) -> i8 {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.adj[u * self.n + v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.sign(u, v) != 0
    }

    /// Edges as sorted `(u, v, sign)` triples with `u < v`.
    pub fn edges(&self) -> &[(usize, usize, i8)] {
        &self.edges
    }

    /// Neighbors of `v` in increasing label order, with edge signs.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let row = &self.adj[v * self.n..(v + 1) * self.n];
        row.iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(u, &s)| (u, s))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    pub fn is_all_positive(&self) -> bool {
        self.edges.iter().all(|&(_, _, s)| s > 0)
    }

    /// Switches at `set`: the sign of every edge with exactly one endpoint
    /// in the set is flipped. The underlying graph is unchanged and applying
    /// the same set twice restores the original graph.
    pub fn switch(&self, set: &SwitchSet) -> Result<Self> {
        set.validate(self.n)?;
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v, s)| {
                let flip = set.contains(u) != set.contains(v);
                (u, v, if flip { -s } else { s })
            })
            .collect();
        SignedGraph::new(self.n, &edges)
    }

    /// Flips the sign of every edge. The spectrum of the result is the
    /// negated spectrum of `self`.
    pub fn negate(&self) -> Self {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v, s)| (u, v, -s)).collect();
        SignedGraph::new(self.n, &edges).expect("negation preserves validity")
    }

    /// The underlying graph: same edge set, all signs positive.
    pub fn underlying(&self) -> Self {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v, _)| (u, v, 1)).collect();
        SignedGraph::new(self.n, &edges).expect("underlying preserves validity")
    }

    /// Signed adjacency matrix: entry `(i, j)` is the sign of edge `ij`, or
    /// 0 when `i` and `j` are not adjacent.
    pub fn adjacency_matrix(&self) -> SignedMatrix {
        SignedMatrix {
            n: self.n,
            entries: self.adj.clone(),
        }
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::ParameterRange(format!(
                "permutation length {} does not match order {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: p,
                    order: self.n,
                });
            }
            if seen[p] {
                return Err(Error::ParameterRange("not a permutation".into()));
            }
            seen[p] = true;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v, s)| (perm[u], perm[v], s))
            .collect();
        SignedGraph::new(self.n, &edges)
    }

    /// Canonicalizes signs within the switching class, returning the
    /// canonical graph together with the switch set that produces it and the
    /// spanning-forest parent array used for the normalization.
    ///
    /// The spanning forest is grown breadth-first from the smallest label of
    /// each component, visiting neighbors in increasing label order; the
    /// canonical representative has every forest edge positive. Two signed
    /// graphs on the same labeled underlying graph are switching equivalent
    /// exactly when their canonical forms coincide.
    pub fn canonicalize(&self) -> Canonicalization {
        let n = self.n;
        let mut potential = vec![1i8; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut visited = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for (v, s) in self.neighbors(u) {
                    if !visited[v] {
                        visited[v] = true;
                        parent[v] = Some(u);
                        potential[v] = potential[u] * s;
                        queue.push_back(v);
                    }
                }
            }
        }
        let set: SwitchSet = (0..n).filter(|&v| potential[v] < 0).collect();
        let graph = self
            .switch(&set)
            .expect("switch set built from own vertices");
        Canonicalization {
            graph,
            switch_set: set,
            parent,
        }
    }

    /// The canonical representative of this graph's switching class (for
    /// the fixed labeling).
    pub fn canonical_switch(&self) -> Self {
        self.canonicalize().graph
    }
}

/// Result of [`SignedGraph::canonicalize`].
#[derive(Debug, Clone)]
pub struct Canonicalization {
    /// Switching-equivalent graph with all spanning-forest edges positive.
    pub graph: SignedGraph,
    /// The set that switches the original graph into `graph`.
    pub switch_set: SwitchSet,
    /// BFS forest parents; `None` marks component roots.
    pub parent: Vec<Option<usize>>,
}

/// Tests whether some vertex relabeling composed with a switching maps one
/// graph onto the other.
///
/// Brute force over all vertex permutations; intended for order at most 10.
pub fn are_switching_isomorphic(a: &SignedGraph, b: &SignedGraph) -> bool {
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.order();
    let mut deg_a: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut deg_b: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    deg_a.sort_unstable();
    deg_b.sort_unstable();
    if deg_a != deg_b {
        return false;
    }
    let canon_a = a.canonical_switch();
    let mut found = false;
    visit_permutations(n, |perm| {
        let same_underlying = b
            .edges()
            .iter()
            .all(|&(u, v, _)| a.has_edge(perm[u], perm[v]));
        if same_underlying {
            let relabeled = b.relabel(perm).expect("valid permutation");
            if relabeled.canonical_switch() == canon_a {
                found = true;
                return false;
            }
        }
        true
    });
    found
}

/// A set of vertices to switch at.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwitchSet {
    members: BTreeSet<usize>,
}

impl SwitchSet {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        SwitchSet {
            members: members.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    fn validate(&self, order: usize) -> Result<()> {
        match self.members.iter().next_back() {
            Some(&max) if max >= order => Err(Error::VertexOutOfRange { vertex: max, order }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for SwitchSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        SwitchSet::new(iter)
    }
}

/// Symmetric `{-1, 0, +1}` matrix with zero diagonal, as produced by
/// [`SignedGraph::adjacency_matrix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl SignedMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        assert!(i < self.n && j < self.n, "index out of range");
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&x| x as f64).collect()
    }
}
