//! Exact one-step drift oracles.
//!
//! Each oracle compares two independently computed exact rationals:
//!
//! * the *enumeration* side applies every one of the `Q` possible
//!   removals to a scratch copy of the graph and recounts the observable
//!   from scratch adjacency, averaging the changes;
//! * the *formula* side evaluates the closed-form conditional expectation
//!   from maintained state.
//!
//! Both sides are ratios of integers, so agreement is asserted with zero
//! tolerance.

use super::observables::compute_t;
use super::params::Rat;
use crate::graph::DynamicGraph;
use std::collections::HashSet;

/// Expected one-step change of the co-degree `Y[u,v]`:
/// `(enumeration, formula)` where the formula is
/// `-Σ_{x ∈ N(u)∩N(v)} (Y[u,x] + Y[v,x] - [uv ∈ E]) / Q`.
pub fn drift_oracle_yuv(g: &DynamicGraph, u: usize, v: usize) -> (Rat, Rat) {
    let triangles = g.enumerate_triangles();
    let q = triangles.len() as i64;
    assert!(q >= 1, "drift oracle requires at least one triangle");
    let before = g.recount_codegree(u, v) as i64;
    let mut sum = 0i64;
    for &t in &triangles {
        let mut h = g.clone();
        h.remove_triangle(t);
        sum += h.recount_codegree(u, v) as i64 - before;
    }
    (Rat::new(sum, q), formula_yuv(g, u, v))
}

/// Formula side of the `Y[u,v]` drift.
pub fn formula_yuv(g: &DynamicGraph, u: usize, v: usize) -> Rat {
    let q = triangle_count_as_i64(g);
    let ind = i64::from(g.has_edge(u, v));
    let sum: i64 = g
        .common_neighbors(u, v)
        .iter()
        .map(|&x| g.codegree(u, x) as i64 + g.codegree(v, x) as i64 - ind)
        .sum();
    Rat::new(-sum, q)
}

/// Expected one-step change of the triangle count:
/// formula `-Σ_{xyz ∈ Q} (Y[x,y] + Y[x,z] + Y[y,z] - 2) / Q`.
pub fn drift_oracle_q(g: &DynamicGraph) -> (Rat, Rat) {
    let triangles = g.enumerate_triangles();
    let q = triangles.len() as i64;
    assert!(q >= 1, "drift oracle requires at least one triangle");
    let mut enum_sum = 0i64;
    let mut formula_sum = 0i64;
    for &t in &triangles {
        let mut h = g.clone();
        h.remove_triangle(t);
        enum_sum += h.count_triangles_brute() as i64 - q;
        formula_sum += t
            .edges()
            .iter()
            .map(|&(x, y)| g.codegree(x, y) as i64)
            .sum::<i64>()
            - 2;
    }
    (Rat::new(enum_sum, q), Rat::new(-formula_sum, q))
}

/// Expected one-step change of the degree `Y_u`: formula `-2·T_u / Q`.
pub fn drift_oracle_yu(g: &DynamicGraph, u: usize) -> (Rat, Rat) {
    let triangles = g.enumerate_triangles();
    let q = triangles.len() as i64;
    assert!(q >= 1, "drift oracle requires at least one triangle");
    let before = g.degree(u) as i64;
    let mut sum = 0i64;
    for &t in &triangles {
        let mut h = g.clone();
        h.remove_triangle(t);
        sum += h.neighbors(u).len() as i64 - before;
    }
    let formula = Rat::new(-2 * compute_t(g, u) as i64, q);
    (Rat::new(sum, q), formula)
}

/// The decomposition of the `Y[u,v]` drift numerator:
/// `Σ_{x ∈ N(u)∩N(v)} (Y[u,x] + Y[v,x] - [uv ∈ E])
///  = R_uv + R_vu + Y[u,v]·[uv ∈ E]`, both sides exact integers.
pub fn decomposition_identity_check(g: &DynamicGraph, u: usize, v: usize) -> bool {
    let ind = i64::from(g.has_edge(u, v));
    let lhs: i64 = g
        .common_neighbors(u, v)
        .iter()
        .map(|&x| g.codegree(u, x) as i64 + g.codegree(v, x) as i64 - ind)
        .sum();
    let rhs = super::observables::compute_r(g, u, v) as i64
        + super::observables::compute_r(g, v, u) as i64
        + g.codegree(u, v) as i64 * ind;
    lhs == rhs
}

fn triangle_count_as_i64(g: &DynamicGraph) -> i64 {
    let q = g.count_triangles_brute() as i64;
    assert!(q >= 1, "drift formulas require at least one triangle");
    q
}

/// Visits every distinct graph reachable from K_n within `depth` removals
/// (the root included), deduplicated by edge set. Requires
/// `n(n-1)/2 <= 128` so an edge set fits one `u128` key.
pub fn for_each_reachable(
    n: usize,
    depth: usize,
    mut f: impl FnMut(&DynamicGraph),
) -> Result<usize, crate::graph::GraphError> {
    assert!(n * (n - 1) / 2 <= 128, "process-tree enumeration supports n <= 16");
    let root = DynamicGraph::new_complete(n)?;
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(edge_key(&root));
    let mut frontier = vec![root];
    let mut visited = 0usize;
    for level in 0..=depth {
        let mut next = Vec::new();
        for g in &frontier {
            f(g);
            visited += 1;
            if level == depth {
                continue;
            }
            for t in g.enumerate_triangles() {
                let mut h = g.clone();
                h.remove_triangle(t);
                if seen.insert(edge_key(&h)) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    Ok(visited)
}

fn edge_key(g: &DynamicGraph) -> u128 {
    let mut key = 0u128;
    let mut bit = 0u32;
    for v in 1..g.n() {
        for u in 0..v {
            if g.has_edge(u, v) {
                key |= 1u128 << bit;
            }
            bit += 1;
        }
    }
    key
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_yuv_drift() {
        let g = DynamicGraph::new_complete(4).unwrap();
        let (exact, formula) = drift_oracle_yuv(&g, 0, 1);
        assert_eq!(exact, Rat::new(-3, 2));
        assert_eq!(formula, Rat::new(-3, 2));
    }

    #[test]
    fn k3_yuv_drift() {
        let g = DynamicGraph::new_complete(3).unwrap();
        let (exact, formula) = drift_oracle_yuv(&g, 0, 1);
        assert_eq!(exact, Rat::from_integer(-1));
        assert_eq!(formula, Rat::from_integer(-1));
    }

    #[test]
    fn empty_co_neighborhood_has_zero_drift() {
        // Kill all common neighbors of 0 and 1 while keeping triangles
        // elsewhere in the graph.
        let mut g = DynamicGraph::new_complete(5).unwrap();
        g.remove_edge(0, 2);
        g.remove_edge(0, 3);
        g.remove_edge(1, 4);
        assert!(g.codegree(0, 1) == 0 || g.common_neighbors(0, 1).is_empty());
        let (exact, formula) = drift_oracle_yuv(&g, 0, 1);
        assert_eq!(exact, Rat::from_integer(0));
        assert_eq!(formula, Rat::from_integer(0));
    }

    #[test]
    fn k4_q_drift() {
        let g = DynamicGraph::new_complete(4).unwrap();
        let (exact, formula) = drift_oracle_q(&g);
        assert_eq!(exact, Rat::from_integer(-4));
        assert_eq!(formula, Rat::from_integer(-4));
    }

    #[test]
    fn k3_q_drift() {
        let g = DynamicGraph::new_complete(3).unwrap();
        let (exact, formula) = drift_oracle_q(&g);
        assert_eq!(exact, Rat::from_integer(-1));
        assert_eq!(formula, Rat::from_integer(-1));
    }

    #[test]
    fn k4_yu_drift() {
        let g = DynamicGraph::new_complete(4).unwrap();
        let (exact, formula) = drift_oracle_yu(&g, 0);
        assert_eq!(exact, Rat::new(-3, 2));
        assert_eq!(formula, Rat::new(-3, 2));
    }

    #[test]
    fn k4_decomposition() {
        let g = DynamicGraph::new_complete(4).unwrap();
        assert!(decomposition_identity_check(&g, 0, 1));
    }

    #[test]
    fn decomposition_with_empty_co_neighborhood() {
        let mut g = DynamicGraph::new_complete(4).unwrap();
        g.remove_edge(2, 3);
        g.remove_edge(0, 2);
        g.remove_edge(1, 3);
        assert!(decomposition_identity_check(&g, 2, 3));
    }

    #[test]
    fn reachable_counts_k4() {
        // K_4 has 4 triangles, and any removal yields a (distinct) star.
        let mut graphs = 0;
        let visited = for_each_reachable(4, 3, |_| graphs += 1).unwrap();
        assert_eq!(visited, graphs);
        assert_eq!(visited, 1 + 4);
    }

    #[test]
    fn drift_oracles_exact_on_small_tree() {
        for_each_reachable(5, 2, |g| {
            if g.count_triangles_brute() == 0 {
                return;
            }
            let (e, f) = drift_oracle_q(g);
            assert_eq!(e, f);
            for u in 0..g.n() {
                let (e, f) = drift_oracle_yu(g, u);
                assert_eq!(e, f);
                for v in 0..u {
                    let (e, f) = drift_oracle_yuv(g, v, u);
                    assert_eq!(e, f, "pair ({v},{u})");
                    assert!(decomposition_identity_check(g, v, u));
                }
            }
        })
        .unwrap();
    }
}
