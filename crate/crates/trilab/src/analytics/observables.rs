//! The expensive per-snapshot observables, computed straight from graph
//! state: `R_uv` (ordered pairs of edges between the co-neighborhood of
//! `u, v` and the neighborhood of `u`) and `T_u` (edges inside a
//! neighborhood), together with their independent identity routes.

use crate::graph::DynamicGraph;

/// `R_uv = #{(x, y) : xy ∈ E, x ∈ N(u)∩N(v), y ∈ N(u), y ≠ v}`, counted
/// by direct enumeration of the ordered pairs. Edges with both endpoints
/// in the co-neighborhood are counted twice, as the definition demands.
pub fn compute_r(g: &DynamicGraph, u: usize, v: usize) -> u64 {
    assert!(u != v);
    let mut count = 0u64;
    let ru = g.row(u);
    for x in g.common_neighbors(u, v) {
        let rx = g.row(x);
        for (i, (&wx, &wu)) in rx.iter().zip(ru.iter()).enumerate() {
            let mut bits = wx & wu;
            while bits != 0 {
                let y = i * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if y != v {
                    count += 1;
                }
            }
        }
    }
    count
}

/// The co-degree-sum route to the same quantity:
/// `R_uv = Σ_{x ∈ N(u)∩N(v)} (Y[u,x] - [uv ∈ E])`, read from the
/// maintained table. Agreement with [`compute_r`] is one of the exact
/// identities the test suites pin down.
pub fn r_identity_route(g: &DynamicGraph, u: usize, v: usize) -> i64 {
    assert!(u != v);
    let ind = i64::from(g.has_edge(u, v));
    g.common_neighbors(u, v)
        .iter()
        .map(|&x| g.codegree(u, x) as i64 - ind)
        .sum()
}

/// `T_u`, the number of edges inside `N(u)`, via the co-degree sum
/// `2·T_u = Σ_{x ∈ N(u)} Y[u,x]`.
pub fn compute_t(g: &DynamicGraph, u: usize) -> u64 {
    let mut twice = 0u64;
    g.for_neighbors(u, |x| twice += g.codegree(u, x) as u64);
    debug_assert!(twice % 2 == 0, "co-degree sum over a neighborhood must be even");
    twice / 2
}

/// `T_u` by brute enumeration of edges with both endpoints in `N(u)`,
/// independent of the maintained co-degree table.
pub fn compute_t_brute(g: &DynamicGraph, u: usize) -> u64 {
    let ru = g.row(u);
    let mut count = 0u64;
    g.for_neighbors(u, |x| {
        // Edges x–y with y ∈ N(u), y > x, so each inner edge counts once.
        let rx = g.row(x);
        let start = x / 64;
        for i in start..ru.len() {
            let mut bits = rx[i] & ru[i];
            if i == start {
                let b = x % 64;
                bits &= !((1u64 << b) | ((1u64 << b) - 1));
            }
            count += bits.count_ones() as u64;
        }
    });
    count
}

/// `Σ_{xy ∈ E} Y[x,y]`, the total sampling weight, recomputed from the
/// maintained table; equals `3·Q` whenever the state is consistent.
pub fn sum_codegrees_over_edges(g: &DynamicGraph) -> i64 {
    let mut sum = 0i64;
    for v in 1..g.n() {
        for x in g.neighbors(v) {
            if x < v {
                sum += g.codegree(x, v) as i64;
            }
        }
    }
    sum
}
