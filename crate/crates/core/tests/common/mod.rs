//! Shared oracles and strategies for the integration suites. Everything
//! here is deliberately independent of the library's own algorithms: cycles
//! are enumerated by DFS, balance is decided by trying all switch sets, and
//! subgraph detection walks raw subsets.
#![allow(dead_code)]

use proptest::prelude::*;
use sgext::{SignedGraph, SwitchSet};

/// Random signed graph on 1..=max_n vertices, each pair absent/positive/
/// negative with equal weight.
pub fn signed_graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(0u8..3, pairs).prop_map(move |states| {
            let mut edges = Vec::new();
            let mut idx = 0;
            for u in 0..n {
                for v in u + 1..n {
                    match states[idx] {
                        1 => edges.push((u, v, 1)),
                        2 => edges.push((u, v, -1)),
                        _ => {}
                    }
                    idx += 1;
                }
            }
            SignedGraph::new(n, &edges).expect("generated edges are valid")
        })
    })
}

/// Random graph together with a random switch set over its vertices.
pub fn graph_with_switch_set(max_n: usize) -> impl Strategy<Value = (SignedGraph, SwitchSet)> {
    signed_graph(max_n).prop_flat_map(|g| {
        let n = g.order();
        proptest::collection::vec(proptest::bool::ANY, n).prop_map(move |mask| {
            let set: SwitchSet = (0..n).filter(|&v| mask[v]).collect();
            (g.clone(), set)
        })
    })
}

/// Random graph together with a random vertex permutation.
pub fn graph_with_permutation(max_n: usize) -> impl Strategy<Value = (SignedGraph, Vec<usize>)> {
    signed_graph(max_n).prop_flat_map(|g| {
        let n = g.order();
        Just(g).prop_perturb(move |g, mut rng| {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                perm.swap(i, j);
            }
            (g, perm)
        })
    })
}

fn product_along(g: &SignedGraph, cycle: &[usize]) -> i8 {
    let mut sign = 1i8;
    for i in 0..cycle.len() {
        let u = cycle[i];
        let v = cycle[(i + 1) % cycle.len()];
        let s = g.sign(u, v);
        assert_ne!(s, 0, "cycle edge missing");
        sign *= s;
    }
    sign
}

/// Every simple cycle of `g`, once, as (vertex sequence, sign product).
/// Exponential; intended for order at most 7.
pub fn all_cycles(g: &SignedGraph) -> Vec<(Vec<usize>, i8)> {
    let n = g.order();
    let mut out = Vec::new();
    let mut used = vec![false; n];
    let mut path = Vec::new();
    fn dfs(
        g: &SignedGraph,
        start: usize,
        used: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, i8)>,
    ) {
        let u = *path.last().unwrap();
        for (v, _) in g.neighbors(u) {
            if v == start {
                // each cycle appears twice (two directions); keep one
                if path.len() >= 3 && path[1] < path[path.len() - 1] {
                    out.push((path.clone(), product_along(g, path)));
                }
            } else if v > start && !used[v] {
                used[v] = true;
                path.push(v);
                dfs(g, start, used, path, out);
                path.pop();
                used[v] = false;
            }
        }
    }
    for start in 0..n {
        used[start] = true;
        path.push(start);
        dfs(g, start, &mut used, &mut path, &mut out);
        path.pop();
        used[start] = false;
    }
    out
}

/// Balance decided by trying every switch set (2^n).
pub fn brute_is_balanced(g: &SignedGraph) -> bool {
    let n = g.order();
    assert!(n <= 16);
    (0u32..1 << n).any(|mask| {
        let set: SwitchSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        g.switch(&set).unwrap().is_all_positive()
    })
}

/// Shortest negative cycle length from the exhaustive cycle list.
pub fn brute_negative_girth(g: &SignedGraph) -> Option<usize> {
    all_cycles(g)
        .iter()
        .filter(|(_, sign)| *sign < 0)
        .map(|(cycle, _)| cycle.len())
        .min()
}

/// Induced signed subgraph on `verts`, relabeled by position.
pub fn induced(g: &SignedGraph, verts: &[usize]) -> SignedGraph {
    let mut edges = Vec::new();
    for (i, &u) in verts.iter().enumerate() {
        for (j, &v) in verts.iter().enumerate().skip(i + 1) {
            let s = g.sign(u, v);
            if s != 0 {
                edges.push((i, j, s));
            }
        }
    }
    SignedGraph::new(verts.len(), &edges).unwrap()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in start..n {
            if n - v < k - current.len() {
                break;
            }
            current.push(v);
            rec(n, k, v + 1, current, out);
            current.pop();
        }
    }
    rec(n, k, 0, &mut current, &mut out);
    out
}

fn is_complete(g: &SignedGraph, verts: &[usize]) -> bool {
    verts
        .iter()
        .enumerate()
        .all(|(i, &u)| verts[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Definitional detector: first k-subset (lexicographic) inducing a
/// complete unbalanced subgraph, with balance decided by switch-set brute
/// force.
pub fn brute_find_unbalanced_complete(g: &SignedGraph, k: usize) -> Option<Vec<usize>> {
    if k > g.order() {
        return None;
    }
    combinations(g.order(), k)
        .into_iter()
        .find(|verts| is_complete(g, verts) && !brute_is_balanced(&induced(g, verts)))
}

/// Largest balanced complete subgraph by raw subset scan.
pub fn brute_balanced_clique_number(g: &SignedGraph) -> usize {
    let n = g.order();
    let mut best = 0;
    for mask in 0u32..1 << n {
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if verts.len() > best && is_complete(g, &verts) && brute_is_balanced(&induced(g, &verts)) {
            best = verts.len();
        }
    }
    best
}

/// Largest complete subgraph by raw subset scan.
pub fn brute_clique_number(g: &SignedGraph) -> usize {
    let n = g.order();
    let mut best = 0;
    for mask in 0u32..1 << n {
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if verts.len() > best && is_complete(g, &verts) {
            best = verts.len();
        }
    }
    best
}

/// Switching isomorphism by raw search over all relabelings and switch
/// sets; for very small orders only.
pub fn brute_switching_isomorphic(a: &SignedGraph, b: &SignedGraph) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let n = a.order();
    assert!(n <= 6);
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let relabeled = b.relabel(&perm).unwrap();
        for mask in 0u32..1 << n {
            let set: SwitchSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if relabeled.switch(&set).unwrap() == *a {
                return true;
            }
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Minimal exact polynomial arithmetic (constant term first) so the
/// characteristic-polynomial oracle below shares nothing with the library.
pub fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_combine(a: &[i128], b: &[i128], b_scale: i128) -> Vec<i128> {
    let mut out = vec![0i128; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] += b_scale * y;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// det(xI - A) by cofactor expansion over exact polynomial entries; for
/// order at most 6.
pub fn char_poly_by_cofactors(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    // entries of xI - A as degree <= 1 polynomials
    let entries: Vec<Vec<Vec<i128>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        vec![-a[i][j], 1]
                    } else if a[i][j] == 0 {
                        Vec::new()
                    } else {
                        vec![-a[i][j]]
                    }
                })
                .collect()
        })
        .collect();
    fn det(m: &[Vec<Vec<i128>>]) -> Vec<i128> {
        let n = m.len();
        if n == 0 {
            return vec![1];
        }
        let mut acc: Vec<i128> = Vec::new();
        for col in 0..n {
            if m[0][col].is_empty() {
                continue;
            }
            let minor: Vec<Vec<Vec<i128>>> = (1..n)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != col)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let term = poly_mul(&m[0][col], &det(&minor));
            let sign = if col % 2 == 0 { 1 } else { -1 };
            acc = poly_combine(&acc, &term, sign);
        }
        acc
    }
    det(&entries)
}

pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

pub fn assert_multiset_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len(), "multiset sizes differ");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for (x, y) in a.iter().zip(&b) {
        assert_close(*x, *y, tol);
    }
}
