//! Dynamic graph on vertex set `0..n` with bitset adjacency and an
//! incrementally maintained co-degree table.
//!
//! The packing process only ever deletes edges, so the structure is
//! monotone: there is no way to re-insert an edge. Co-degrees
//! `Y[u,v] = |N(u) ∩ N(v)|` are kept exact under every deletion and are
//! readable in O(1); a full recount from adjacency is available as an
//! independent oracle for tests.

use thiserror::Error;

/// Errors from graph construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    /// Fewer than 3 vertices admit no triangle; the process is undefined.
    #[error("vertex count must be at least 3, got {0}")]
    TooFewVertices(usize),
}

/// A triangle, stored with `a < b < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Triangle {
    pub fn new(x: usize, y: usize, z: usize) -> Self {
        let mut v = [x, y, z];
        v.sort_unstable();
        assert!(v[0] < v[1] && v[1] < v[2], "triangle vertices must be distinct");
        Triangle { a: v[0], b: v[1], c: v[2] }
    }

    /// The three edges in canonical (pair-id ascending) order.
    pub fn edges(&self) -> [(usize, usize); 3] {
        // pair_id orders primarily by the larger endpoint, so with
        // a < b < c the ascending order is (a,b), (a,c), (b,c).
        [(self.a, self.b), (self.a, self.c), (self.b, self.c)]
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }
}

/// Canonical index of an unordered vertex pair: `pair_id(u, v) = v(v-1)/2 + u`
/// for `u < v`. Slots for a graph on `n` vertices occupy `0..n(n-1)/2`.
#[inline(always)]
pub fn pair_id(u: usize, v: usize) -> usize {
    debug_assert!(u != v);
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    hi * (hi - 1) / 2 + lo
}

/// Dynamic undirected graph supporting edge deletion with incremental
/// co-degree maintenance.
#[derive(Clone)]
pub struct DynamicGraph {
    n: usize,
    /// Words per adjacency row.
    stride: usize,
    /// Flat row-major adjacency bitsets: row `v` is `adj[v*stride..(v+1)*stride]`.
    adj: Vec<u64>,
    deg: Vec<u32>,
    /// Flat triangular co-degree table indexed by [`pair_id`].
    cod: Vec<u32>,
    /// `tri_base[v] = v(v-1)/2`, the base offset of row `v` in `cod`.
    tri_base: Vec<usize>,
    edge_count: usize,
}

impl DynamicGraph {
    /// The complete graph K_n. Every co-degree starts at `n - 2`.
    pub fn new_complete(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::TooFewVertices(n));
        }
        let stride = n.div_ceil(64);
        let mut adj = vec![0u64; n * stride];
        for v in 0..n {
            let row = &mut adj[v * stride..(v + 1) * stride];
            for (w, word) in row.iter_mut().enumerate() {
                let lo = w * 64;
                let hi = (lo + 64).min(n);
                if hi > lo {
                    *word = if hi - lo == 64 { !0u64 } else { (1u64 << (hi - lo)) - 1 };
                }
            }
            row[v / 64] &= !(1u64 << (v % 64));
        }
        let tri_base: Vec<usize> = (0..n).map(|v| v * v.saturating_sub(1) / 2).collect();
        Ok(DynamicGraph {
            n,
            stride,
            adj,
            deg: vec![(n - 1) as u32; n],
            cod: vec![(n - 2) as u32; n * (n - 1) / 2],
            tri_base,
            edge_count: n * (n - 1) / 2,
        })
    }

    #[inline(always)]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline(always)]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline(always)]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.stride..(v + 1) * self.stride]
    }

    #[inline(always)]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.stride + v / 64] >> (v % 64) & 1 != 0
    }

    /// Degree `Y_u = |N(u)|`, read from maintained state.
    #[inline(always)]
    pub fn degree(&self, u: usize) -> u32 {
        self.deg[u]
    }

    /// Co-degree `Y[u,v] = |N(u) ∩ N(v)|`, read from maintained state.
    #[inline(always)]
    pub fn codegree(&self, u: usize, v: usize) -> u32 {
        debug_assert!(u != v);
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        self.cod[self.tri_base[hi] + lo]
    }

    #[inline(always)]
    fn cod_index(&self, lo: usize, hi: usize) -> usize {
        self.tri_base[hi] + lo
    }

    /// Triple co-degree `Y[u,v,w] = |N(u) ∩ N(v) ∩ N(w)|`, computed on demand.
    pub fn triple_codegree(&self, u: usize, v: usize, w: usize) -> u32 {
        debug_assert!(u != v && v != w && u != w);
        let (ru, rv, rw) = (self.row(u), self.row(v), self.row(w));
        let mut count = 0u32;
        for i in 0..self.stride {
            count += (ru[i] & rv[i] & rw[i]).count_ones();
        }
        count
    }

    /// Enumerates `N(u) ∩ N(v)` in ascending vertex order.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        let (ru, rv) = (self.row(u), self.row(v));
        let mut out = Vec::with_capacity(self.codegree(u, v) as usize);
        for i in 0..self.stride {
            let mut bits = ru[i] & rv[i];
            while bits != 0 {
                out.push(i * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    /// The `k`-th (0-based, ascending) vertex of `N(u) ∩ N(v)`.
    ///
    /// Panics if fewer than `k + 1` common neighbors exist; used by the
    /// sampler after an exact draw in `0..codegree(u, v)`.
    pub fn select_common_neighbor(&self, u: usize, v: usize, k: u32) -> usize {
        let (ru, rv) = (self.row(u), self.row(v));
        let mut remaining = k;
        for i in 0..self.stride {
            let mut bits = ru[i] & rv[i];
            let ones = bits.count_ones();
            if remaining < ones {
                for _ in 0..remaining {
                    bits &= bits - 1;
                }
                return i * 64 + bits.trailing_zeros() as usize;
            }
            remaining -= ones;
        }
        panic!("select_common_neighbor: rank {k} out of range for pair ({u},{v})");
    }

    /// Calls `f(x)` for every neighbor of `v`, ascending.
    #[inline]
    pub fn for_neighbors(&self, v: usize, mut f: impl FnMut(usize)) {
        let row = self.row(v);
        for (i, &word) in row.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                f(i * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.deg[v] as usize);
        self.for_neighbors(v, |x| out.push(x));
        out
    }

    /// Removes edge `uv`, updating degrees, edge count and every affected
    /// co-degree. Removing an absent edge is a contract violation.
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.remove_edge_notify(u, v, |_, _| {});
    }

    /// [`Self::remove_edge`], additionally reporting each decremented pair
    /// that is still a *present edge* afterwards: `f(x, y)` fires once per
    /// such pair. The triangle index uses this to keep sampling weights in
    /// step without scanning anything itself.
    pub fn remove_edge_notify(&mut self, u: usize, v: usize, mut f: impl FnMut(usize, usize)) {
        assert!(u != v && u < self.n && v < self.n, "remove_edge: bad pair ({u},{v})");
        assert!(self.has_edge(u, v), "remove_edge: edge ({u},{v}) is absent");

        self.adj[u * self.stride + v / 64] &= !(1u64 << (v % 64));
        self.adj[v * self.stride + u / 64] &= !(1u64 << (u % 64));
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        self.edge_count -= 1;

        // Post-removal: every x in N(u) loses a common neighbor with v
        // (namely u), and symmetrically. Pairs that are edges carry
        // sampling weight, so those are reported to the callback.
        self.decrement_pairs_with(u, v, &mut f);
        self.decrement_pairs_with(v, u, &mut f);
    }

    /// For every `x` in `N(src)` (post-removal), decrement `cod[x, other]`;
    /// fire `f(x, other)` when `x other` is a present edge, i.e. when `x`
    /// is also a neighbor of `other`.
    #[inline]
    fn decrement_pairs_with(
        &mut self,
        src: usize,
        other: usize,
        f: &mut impl FnMut(usize, usize),
    ) {
        let src_base = src * self.stride;
        let other_base = other * self.stride;
        for i in 0..self.stride {
            let word = self.adj[src_base + i];
            if word == 0 {
                continue;
            }
            let common = word & self.adj[other_base + i];
            let mut bits = word;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                let x = i * 64 + bits.trailing_zeros() as usize;
                let idx = if x < other {
                    self.cod_index(x, other)
                } else {
                    self.cod_index(other, x)
                };
                debug_assert!(self.cod[idx] > 0);
                self.cod[idx] -= 1;
                if common & bit != 0 {
                    f(x, other);
                }
                bits ^= bit;
            }
        }
    }

    /// Removes the three edges of `t` in canonical order. The caller is
    /// responsible for any weight bookkeeping; the triangle index has its
    /// own wrapper.
    pub fn remove_triangle(&mut self, t: Triangle) {
        for (x, y) in t.edges() {
            self.remove_edge(x, y);
        }
    }

    // ---------------------------------------------------------------------
    // Brute-force oracles (recounts straight from adjacency)
    // ---------------------------------------------------------------------

    /// O(n/64) recount of one co-degree from adjacency.
    pub fn recount_codegree(&self, u: usize, v: usize) -> u32 {
        let (ru, rv) = (self.row(u), self.row(v));
        (0..self.stride).map(|i| (ru[i] & rv[i]).count_ones()).sum()
    }

    /// Full O(n³) recount of the co-degree table; equality with the
    /// maintained table is the module's central invariant.
    pub fn recount_all_codegrees(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.n * (self.n - 1) / 2];
        for v in 1..self.n {
            for u in 0..v {
                out[self.tri_base[v] + u] = self.recount_codegree(u, v);
            }
        }
        out
    }

    /// Maintained co-degree table as a flat slice (pair-id indexed).
    pub fn codegree_table(&self) -> &[u32] {
        &self.cod
    }

    /// Number of common neighbors of `u` and `v` strictly greater than `above`.
    #[inline]
    fn common_above(&self, u: usize, v: usize, above: usize) -> u32 {
        let (ru, rv) = (self.row(u), self.row(v));
        let start = above / 64;
        let mut count = 0u32;
        for j in start..self.stride {
            let mut common = ru[j] & rv[j];
            if j == start {
                let b = above % 64;
                common &= !((1u64 << b) | ((1u64 << b) - 1));
            }
            count += common.count_ones();
        }
        count
    }

    /// Brute-force triangle count, each triangle counted once. Works from
    /// adjacency alone, independent of the maintained co-degree table.
    pub fn count_triangles_brute(&self) -> u64 {
        let mut count = 0u64;
        for v in 1..self.n {
            let rv = self.row(v);
            // u < v adjacent to v; count common neighbors above v.
            for i in 0..=(v - 1) / 64 {
                let mut bits = rv[i];
                if i == v / 64 {
                    bits &= (1u64 << (v % 64)) - 1;
                }
                while bits != 0 {
                    let u = i * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    count += self.common_above(u, v, v) as u64;
                }
            }
        }
        count
    }

    pub fn is_triangle_free(&self) -> bool {
        self.count_triangles_brute() == 0
    }

    /// Sum of all degrees; equals twice the edge count.
    pub fn degree_sum(&self) -> u64 {
        self.deg.iter().map(|&d| d as u64).sum()
    }

    /// All triangles, each once, ascending by (a, b, c).
    pub fn enumerate_triangles(&self) -> Vec<Triangle> {
        let mut out = Vec::new();
        for b in 0..self.n {
            let rb = self.row(b);
            for a in 0..b {
                if !self.has_edge(a, b) {
                    continue;
                }
                let ra = self.row(a);
                for j in b / 64..self.stride {
                    let mut common = ra[j] & rb[j];
                    if j == b / 64 {
                        common &= !((1u64 << (b % 64)) | ((1u64 << (b % 64)) - 1));
                    }
                    while common != 0 {
                        let c = j * 64 + common.trailing_zeros() as usize;
                        common &= common - 1;
                        out.push(Triangle { a, b, c });
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complete_graph_counts() {
        let g = DynamicGraph::new_complete(5).unwrap();
        assert_eq!(g.edge_count(), 10);
        for v in 1..5 {
            for u in 0..v {
                assert_eq!(g.codegree(u, v), 3);
            }
        }

        let g3 = DynamicGraph::new_complete(3).unwrap();
        assert_eq!(g3.edge_count(), 3);
        assert_eq!(g3.codegree(0, 1), 1);

        let g4 = DynamicGraph::new_complete(4).unwrap();
        for v in 1..4 {
            for u in 0..v {
                assert_eq!(g4.codegree(u, v), 2);
            }
        }
    }

    #[test]
    fn rejects_tiny_n() {
        assert!(matches!(DynamicGraph::new_complete(2), Err(GraphError::TooFewVertices(2))));
        assert!(DynamicGraph::new_complete(0).is_err());
        assert!(DynamicGraph::new_complete(3).is_ok());
    }

    #[test]
    fn k4_remove_edge_codegrees() {
        let mut g = DynamicGraph::new_complete(4).unwrap();
        g.remove_edge(0, 1); // ab
        assert_eq!(g.codegree(2, 3), 2); // Y_{c,d} unchanged
        assert_eq!(g.codegree(0, 2), 1); // Y_{a,c} 2 -> 1
        assert_eq!(g.codegree(1, 2), 1); // Y_{b,c} 2 -> 1
        assert_eq!(g.codegree(0, 1), 2); // untouched by its own removal
        assert_eq!(g.recount_all_codegrees(), g.codegree_table());
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn k3_remove_edge_kills_triangle() {
        let mut g = DynamicGraph::new_complete(3).unwrap();
        g.remove_edge(1, 2);
        assert_eq!(g.count_triangles_brute(), 0);
        for v in 1..3 {
            for u in 0..v {
                assert!(g.codegree(u, v) <= 1);
            }
        }
    }

    #[test]
    #[should_panic(expected = "absent")]
    fn remove_absent_edge_panics() {
        let mut g = DynamicGraph::new_complete(3).unwrap();
        g.remove_edge(0, 1);
        g.remove_edge(0, 1);
    }

    #[test]
    fn k5_triple_codegree() {
        let g = DynamicGraph::new_complete(5).unwrap();
        assert_eq!(g.triple_codegree(0, 1, 2), 2);
    }

    #[test]
    fn k4_minus_edge_reads() {
        let mut g = DynamicGraph::new_complete(4).unwrap();
        g.remove_edge(2, 3); // cd
        assert_eq!(g.codegree(2, 3), 2);
        assert_eq!(g.degree(2), 2);
        assert_eq!(g.common_neighbors(2, 3), vec![0, 1]);
    }

    #[test]
    fn common_neighbors_matches_codegree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut g = DynamicGraph::new_complete(20).unwrap();
        for _ in 0..80 {
            let u = rng.random_range(0..20);
            let v = rng.random_range(0..20);
            if u != v && g.has_edge(u, v) {
                g.remove_edge(u, v);
            }
        }
        for v in 1..20 {
            for u in 0..v {
                assert_eq!(g.common_neighbors(u, v).len() as u32, g.codegree(u, v));
            }
        }
    }

    #[test]
    fn triangle_enumeration_matches_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut g = DynamicGraph::new_complete(17).unwrap();
        for _ in 0..60 {
            let u = rng.random_range(0..17);
            let v = rng.random_range(0..17);
            if u != v && g.has_edge(u, v) {
                g.remove_edge(u, v);
            }
        }
        let list = g.enumerate_triangles();
        assert_eq!(list.len() as u64, g.count_triangles_brute());
        for t in &list {
            assert!(g.has_edge(t.a, t.b) && g.has_edge(t.a, t.c) && g.has_edge(t.b, t.c));
        }
    }

    #[test]
    fn select_common_neighbor_ranks() {
        let g = DynamicGraph::new_complete(6).unwrap();
        let common = g.common_neighbors(0, 1);
        for (k, &x) in common.iter().enumerate() {
            assert_eq!(g.select_common_neighbor(0, 1, k as u32), x);
        }
    }

    proptest! {
        // Random deletion sequences: the maintained co-degree table always
        // equals a from-scratch recount, and handshake/edge-count agree.
        #[test]
        fn maintained_codegrees_match_recount(seed in 0u64..500, n in 4usize..40, deletions in 1usize..120) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = DynamicGraph::new_complete(n).unwrap();
            for _ in 0..deletions {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u != v && g.has_edge(u, v) {
                    g.remove_edge(u, v);
                }
            }
            prop_assert_eq!(g.recount_all_codegrees(), g.codegree_table().to_vec());
            prop_assert_eq!(g.degree_sum(), 2 * g.edge_count() as u64);
        }
    }
}
