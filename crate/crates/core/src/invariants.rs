//! Balance, negative girth, clique numbers, and forbidden-configuration
//! detection.
//!
//! Every predicate here is a pure function of an immutable graph, and the
//! balance test returns a certificate that can be checked independently:
//! either a switch set that makes the graph all-positive or a cycle whose
//! sign product is negative.

use crate::graph::{SignedGraph, SwitchSet};
use crate::spectra;
use crate::{Error, Result};

/// Witness accompanying a balance verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum BalanceCertificate {
    /// Applying this switch set yields an all-positive graph.
    SwitchingToAllPositive(SwitchSet),
    /// Vertex sequence of a cycle with sign product -1 (closing edge from
    /// last to first vertex implied).
    NegativeCycle(Vec<usize>),
}

/// Sign product along a closed vertex sequence, or `None` when the sequence
/// does not describe a cycle of the graph.
pub fn cycle_sign(g: &SignedGraph, cycle: &[usize]) -> Option<i8> {
    if cycle.len() < 3 {
        return None;
    }
    let mut product = 1i8;
    for i in 0..cycle.len() {
        let u = cycle[i];
        let v = cycle[(i + 1) % cycle.len()];
        if u >= g.order() || v >= g.order() {
            return None;
        }
        let s = g.sign(u, v);
        if s == 0 {
            return None;
        }
        product *= s;
    }
    Some(product)
}

/// Whether `g` is switching equivalent to an all-positive graph, together
/// with a self-verifying certificate.
///
/// Decided through the canonical spanning-forest normalization: the graph
/// is balanced exactly when its canonical form is all-positive. An
/// unbalanced graph yields a negative fundamental cycle through the forest.
pub fn is_balanced(g: &SignedGraph) -> (bool, BalanceCertificate) {
    let canon = g.canonicalize();
    if canon.graph.is_all_positive() {
        return (
            true,
            BalanceCertificate::SwitchingToAllPositive(canon.switch_set),
        );
    }
    let &(u, v, _) = canon
        .graph
        .edges()
        .iter()
        .find(|&&(_, _, s)| s < 0)
        .expect("non-all-positive graph has a negative edge");
    let cycle = forest_cycle(&canon.parent, u, v);
    debug_assert_eq!(cycle_sign(g, &cycle), Some(-1));
    (false, BalanceCertificate::NegativeCycle(cycle))
}

/// Closes the non-forest edge `{u, v}` into a cycle through the forest.
fn forest_cycle(parent: &[Option<usize>], u: usize, v: usize) -> Vec<usize> {
    let mut up = vec![u];
    let mut cur = u;
    while let Some(p) = parent[cur] {
        up.push(p);
        cur = p;
    }
    let mut down = vec![v];
    let mut cur = v;
    while !up.contains(&cur) {
        let p = parent[cur].expect("endpoints share a component");
        down.push(p);
        cur = p;
    }
    let meet = up
        .iter()
        .position(|&w| w == cur)
        .expect("meeting vertex on path");
    let mut cycle: Vec<usize> = up[..=meet].to_vec();
    cycle.extend(down[..down.len() - 1].iter().rev());
    cycle
}

/// Length of a shortest negative cycle, or `None` for balanced graphs.
///
/// Breadth-first search on the double cover, where each vertex splits into
/// an even-parity and an odd-parity copy and an edge connects copies of its
/// endpoints with parities differing by the edge sign. The distance from a
/// vertex's even copy to its own odd copy is the shortest negative closed
/// walk through it, and the minimum over all vertices is attained by a
/// simple cycle.
pub fn negative_girth(g: &SignedGraph) -> Option<usize> {
    let n = g.order();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; 2 * n];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        dist.fill(usize::MAX);
        queue.clear();
        dist[2 * start] = 0;
        queue.push_back(2 * start);
        while let Some(state) = queue.pop_front() {
            let (u, parity) = (state / 2, state % 2);
            let d = dist[state];
            if let Some(b) = best {
                if d + 1 >= b {
                    continue;
                }
            }
            for (v, s) in g.neighbors(u) {
                let next_parity = if s < 0 { 1 - parity } else { parity };
                let next = 2 * v + next_parity;
                if dist[next] == usize::MAX {
                    dist[next] = d + 1;
                    queue.push_back(next);
                }
            }
        }
        if dist[2 * start + 1] != usize::MAX {
            best = Some(best.map_or(dist[2 * start + 1], |b| b.min(dist[2 * start + 1])));
        }
    }
    best
}

fn neighbor_masks(g: &SignedGraph) -> Vec<u32> {
    let n = g.order();
    assert!(n <= 31, "bitset clique search supports order up to 31");
    (0..n)
        .map(|v| {
            let mut mask = 0u32;
            for (u, _) in g.neighbors(v) {
                mask |= 1 << u;
            }
            mask
        })
        .collect()
}

/// Clique number of the underlying graph. Exponential search with
/// candidate pruning; intended for small orders (up to about 12).
pub fn clique_number(g: &SignedGraph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let rows = neighbor_masks(g);
    let mut best = 0;
    fn extend(rows: &[u32], mut cand: u32, size: usize, best: &mut usize) {
        if size > *best {
            *best = size;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            extend(rows, cand & rows[v], size + 1, best);
        }
    }
    extend(&rows, (1u32 << n) - 1, 0, &mut best);
    best
}

/// Potential of `v` relative to the clique built so far, and whether the
/// star of fundamental triangles through the first clique vertex stays
/// positive. A complete signed graph is balanced exactly when vertex
/// potentials `t` with `sign(u, v) = t_u * t_v` exist.
fn clique_potential(g: &SignedGraph, clique: &[(usize, i8)], v: usize) -> (i8, bool) {
    match clique.first() {
        None => (1, true),
        Some(&(c0, t0)) => {
            let t = t0 * g.sign(c0, v);
            let ok = clique.iter().all(|&(c, tc)| g.sign(c, v) == t * tc);
            (t, ok)
        }
    }
}

/// Largest order of a balanced complete subgraph. Intended for small
/// orders (up to about 12).
pub fn balanced_clique_number(g: &SignedGraph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let rows = neighbor_masks(g);
    let mut best = 0;
    let mut clique: Vec<(usize, i8)> = Vec::new();
    fn extend(
        g: &SignedGraph,
        rows: &[u32],
        clique: &mut Vec<(usize, i8)>,
        mut cand: u32,
        best: &mut usize,
    ) {
        if clique.len() > *best {
            *best = clique.len();
        }
        while cand != 0 {
            if clique.len() + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let (t, consistent) = clique_potential(g, clique, v);
            if consistent {
                clique.push((v, t));
                extend(g, rows, clique, cand & rows[v], best);
                clique.pop();
            }
        }
    }
    extend(g, &rows, &mut clique, (1u32 << n) - 1, &mut best);
    best
}

/// Finds some `k`-subset inducing a complete, unbalanced signed subgraph.
///
/// Subsets are explored in lexicographic order with adjacency pruning, so
/// the lexicographically smallest witness is returned. `k > n` yields
/// `None` (vacuously free); `k < 2` is an error.
pub fn find_unbalanced_complete(g: &SignedGraph, k: usize) -> Result<Option<Vec<usize>>> {
    if k < 2 {
        return Err(Error::ParameterRange(format!(
            "unbalanced complete subgraphs need order >= 2, got {k}"
        )));
    }
    let n = g.order();
    if k > n {
        return Ok(None);
    }
    let rows = neighbor_masks(g);
    let mut clique: Vec<(usize, i8)> = Vec::new();
    fn search(
        g: &SignedGraph,
        rows: &[u32],
        k: usize,
        clique: &mut Vec<(usize, i8)>,
        mut cand: u32,
        unbalanced: bool,
    ) -> Option<Vec<usize>> {
        if clique.len() == k {
            return unbalanced.then(|| clique.iter().map(|&(v, _)| v).collect());
        }
        let need = k - clique.len();
        while cand != 0 {
            if (cand.count_ones() as usize) < need {
                return None;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let (t, consistent) = clique_potential(g, clique, v);
            clique.push((v, t));
            let hit = search(
                g,
                rows,
                k,
                clique,
                cand & rows[v],
                unbalanced || !consistent,
            );
            clique.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
    Ok(search(g, &rows, k, &mut clique, (1u32 << n) - 1, false))
}

/// True when no triangle of `g` has sign product -1; equivalent to the
/// negative girth not being 3.
pub fn is_c3_minus_free(g: &SignedGraph) -> bool {
    let n = g.order();
    for u in 0..n {
        for v in u + 1..n {
            let suv = g.sign(u, v);
            if suv == 0 {
                continue;
            }
            for w in v + 1..n {
                let suw = g.sign(u, w);
                let svw = g.sign(v, w);
                if suw != 0 && svw != 0 && suv * suw * svw < 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Outcome of the radius/index hypothesis check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RadiusIndexCheck {
    pub order: usize,
    pub r: usize,
    pub spectral_radius: f64,
    pub index: f64,
    /// Whether `rho > n - 2`.
    pub radius_exceeds_bound: bool,
    /// Whether the negation has no balanced complete subgraph of order r+1.
    pub negation_free: bool,
    pub hypotheses_hold: bool,
    /// Present when the hypotheses hold: whether `rho == lambda_1` within
    /// 1e-9.
    pub radius_equals_index: Option<bool>,
}

/// Checks the hypotheses `rho(g) > n - 2` and "the negation has no balanced
/// complete subgraph of order r+1" for `n >= 2r`, `r >= 4`, and reports
/// whether the spectral radius coincides with the index when they do.
pub fn check_radius_equals_index(g: &SignedGraph, r: usize) -> Result<RadiusIndexCheck> {
    let n = g.order();
    if r < 4 || n < 2 * r {
        return Err(Error::ParameterRange(format!(
            "radius/index check requires r >= 4 and n >= 2r, got n={n}, r={r}"
        )));
    }
    let s = spectra::spectrum(g);
    let rho = s.spectral_radius();
    let lambda1 = s.index();
    let radius_exceeds_bound = rho > (n - 2) as f64;
    let negation_free = balanced_clique_number(&g.negate()) <= r;
    let hypotheses_hold = radius_exceeds_bound && negation_free;
    let radius_equals_index = hypotheses_hold.then(|| (rho - lambda1).abs() <= 1e-9);
    Ok(RadiusIndexCheck {
        order: n,
        r,
        spectral_radius: rho,
        index: lambda1,
        radius_exceeds_bound,
        negation_free,
        hypotheses_hold,
        radius_equals_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete, gamma_construction, turan_graph, unbalanced_complete};

    fn neg_triangle() -> SignedGraph {
        SignedGraph::new(3, &[(0, 1, 1), (0, 2, 1), (1, 2, -1)]).unwrap()
    }

    fn unbalanced_c5() -> SignedGraph {
        SignedGraph::new(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (0, 4, -1)]).unwrap()
    }

    #[test]
    fn balanced_all_positive_complete() {
        let (ok, cert) = is_balanced(&complete(5, 1).unwrap());
        assert!(ok);
        assert_eq!(
            cert,
            BalanceCertificate::SwitchingToAllPositive(SwitchSet::empty())
        );
    }

    #[test]
    fn unbalanced_triangle_certificate() {
        let g = neg_triangle();
        let (ok, cert) = is_balanced(&g);
        assert!(!ok);
        match cert {
            BalanceCertificate::NegativeCycle(cycle) => {
                assert_eq!(cycle.len(), 3);
                assert_eq!(cycle_sign(&g, &cycle), Some(-1));
            }
            other => panic!("expected a negative cycle, got {other:?}"),
        }
    }

    #[test]
    fn two_negative_edges_triangle_is_balanced() {
        let g = SignedGraph::new(3, &[(0, 1, 1), (0, 2, -1), (1, 2, -1)]).unwrap();
        let (ok, cert) = is_balanced(&g);
        assert!(ok);
        // oracle: some switch set over all 2^3 choices clears the signs
        let mut found = false;
        for mask in 0u8..8 {
            let set: SwitchSet = (0..3).filter(|&v| mask >> v & 1 == 1).collect();
            if g.switch(&set).unwrap().is_all_positive() {
                found = true;
            }
        }
        assert!(found);
        match cert {
            BalanceCertificate::SwitchingToAllPositive(set) => {
                assert!(g.switch(&set).unwrap().is_all_positive());
            }
            other => panic!("expected a switching certificate, got {other:?}"),
        }
    }

    #[test]
    fn negative_girth_examples() {
        assert_eq!(negative_girth(&neg_triangle()), Some(3));
        assert_eq!(negative_girth(&complete(4, 1).unwrap()), None);
        assert_eq!(negative_girth(&unbalanced_c5()), Some(5));
    }

    #[test]
    fn negative_girth_matches_triangle_predicate() {
        let gamma = gamma_construction(6, 3).unwrap();
        assert_eq!(negative_girth(&gamma), Some(3));
        assert!(!is_c3_minus_free(&gamma));
    }

    #[test]
    fn clique_number_examples() {
        assert_eq!(clique_number(&complete(5, -1).unwrap()), 5);
        let c5 = unbalanced_c5();
        assert_eq!(clique_number(&c5), 2);
        let (t24, _) = turan_graph(4, 2).unwrap();
        assert_eq!(clique_number(&t24), 2);
        assert_eq!(clique_number(&SignedGraph::new(0, &[]).unwrap()), 0);
        assert_eq!(clique_number(&SignedGraph::new(3, &[]).unwrap()), 1);
    }

    #[test]
    fn balanced_clique_number_examples() {
        assert_eq!(balanced_clique_number(&complete(5, 1).unwrap()), 5);
        assert_eq!(balanced_clique_number(&neg_triangle()), 2);
        // all-negative K5: every triangle is negative, pairs are balanced
        assert_eq!(balanced_clique_number(&complete(5, -1).unwrap()), 2);
    }

    #[test]
    fn find_unbalanced_complete_examples() {
        let k6 = complete(6, 1).unwrap();
        for k in 2..=6 {
            assert_eq!(find_unbalanced_complete(&k6, k).unwrap(), None);
        }
        let g = unbalanced_complete(4).unwrap();
        assert_eq!(
            find_unbalanced_complete(&g, 4).unwrap(),
            Some(vec![0, 1, 2, 3])
        );
        assert_eq!(
            find_unbalanced_complete(&g, 5).unwrap(),
            None,
            "k beyond order"
        );
        assert!(find_unbalanced_complete(&g, 1).is_err());
    }

    #[test]
    fn c3_free_examples() {
        assert!(!is_c3_minus_free(&neg_triangle()));
        assert!(is_c3_minus_free(&unbalanced_c5()));
        assert!(is_c3_minus_free(&complete(6, 1).unwrap()));
    }

    #[test]
    fn radius_index_check_on_gamma() {
        let g = gamma_construction(10, 4).unwrap();
        let report = check_radius_equals_index(&g, 4).unwrap();
        assert!(report.radius_exceeds_bound);
        assert!(report.negation_free);
        assert!(report.hypotheses_hold);
        assert_eq!(report.radius_equals_index, Some(true));
    }

    #[test]
    fn radius_index_check_negative_cases() {
        // negation of the all-negative K10 is the balanced complete K10
        let g = complete(10, -1).unwrap();
        let report = check_radius_equals_index(&g, 4).unwrap();
        assert!(report.radius_exceeds_bound);
        assert!(!report.negation_free);
        assert!(!report.hypotheses_hold);
        assert_eq!(report.radius_equals_index, None);

        // a sparse graph has small spectral radius
        let c10 = SignedGraph::new(
            10,
            &(0..10).map(|i| (i, (i + 1) % 10, 1)).collect::<Vec<_>>(),
        )
        .unwrap();
        let report = check_radius_equals_index(&c10, 4).unwrap();
        assert!(!report.radius_exceeds_bound);
        assert!(!report.hypotheses_hold);

        assert!(check_radius_equals_index(&g, 3).is_err());
        assert!(check_radius_equals_index(&complete(6, 1).unwrap(), 4).is_err());
    }
}
