//! Implicit multiset of surviving triangles with exact uniform sampling.
//!
//! Every present edge `uv` carries weight `Y[u,v]`, the number of triangles
//! through it, so the total weight is `3·Q`. A triangle is drawn by first
//! picking an edge with probability proportional to its weight and then a
//! uniform common neighbor; each triangle is reachable through its three
//! edges with overall probability exactly `1/Q`.
//!
//! Weights are organized per *bucket*, where the bucket of an edge is its
//! larger endpoint, with an extra level of 64-bucket block sums. Updates
//! (one per co-degree decrement of a surviving edge) cost O(1) into arrays
//! that stay cache-resident, and a draw costs one scan over `n/64` block
//! sums, up to 64 row sums, and the sampled bucket's adjacency row. The
//! per-slot weights themselves are read straight from the graph's
//! co-degree table, so no second copy of them exists to drift out of sync.

use crate::graph::{DynamicGraph, Triangle};
use rand::Rng;

/// Sampling structure over edges weighted by co-degrees.
#[derive(Clone)]
pub struct TriangleIndex {
    /// `row_sum[v]` = total weight of present edges whose larger endpoint is `v`.
    row_sum: Vec<i64>,
    /// 64-row block sums over `row_sum`.
    block_sum: Vec<i64>,
    /// Grand total; equals `3·Q`.
    total: i64,
}

impl TriangleIndex {
    /// Builds the index from the graph's current state.
    pub fn build(g: &DynamicGraph) -> Self {
        let n = g.n();
        let mut row_sum = vec![0i64; n];
        for v in 1..n {
            let mut acc = 0i64;
            for_lower_neighbors(g, v, |u| acc += g.codegree(u, v) as i64);
            row_sum[v] = acc;
        }
        let blocks = n.div_ceil(64);
        let mut block_sum = vec![0i64; blocks];
        for v in 0..n {
            block_sum[v / 64] += row_sum[v];
        }
        let total = block_sum.iter().sum();
        TriangleIndex { row_sum, block_sum, total }
    }

    /// Total weight `Σ_e Y_e = 3·Q`.
    #[inline]
    pub fn total_weight(&self) -> i64 {
        self.total
    }

    /// Number of surviving triangles.
    ///
    /// Panics if the total weight is not divisible by 3, which signals a
    /// corrupted index.
    #[inline]
    pub fn total_triangles(&self) -> i64 {
        assert!(self.total % 3 == 0, "index corrupt: total weight {} not divisible by 3", self.total);
        self.total / 3
    }

    #[inline(always)]
    fn sub(&mut self, bucket: usize, amount: i64) {
        self.row_sum[bucket] -= amount;
        self.block_sum[bucket / 64] -= amount;
        self.total -= amount;
        debug_assert!(self.row_sum[bucket] >= 0 && self.total >= 0);
    }

    /// Draws one triangle uniformly from the `Q` survivors, or `None` when
    /// the graph is triangle-free.
    ///
    /// Consumes the random stream in a fixed order: one integer in
    /// `0..3Q` for the weighted edge draw, then one integer in
    /// `0..Y[u,v]` for the uniform vertex draw.
    pub fn sample_uniform_triangle<R: Rng + ?Sized>(
        &self,
        g: &DynamicGraph,
        rng: &mut R,
    ) -> Option<Triangle> {
        if self.total == 0 {
            return None;
        }
        let r = rng.random_range(0..self.total as u64) as i64;
        let (u, v) = self.edge_at(g, r);
        let y = g.codegree(u, v);
        debug_assert!(y > 0, "index corrupt: sampled edge ({u},{v}) with weight 0");
        let k = rng.random_range(0..y);
        let x = g.select_common_neighbor(u, v, k);
        Some(Triangle::new(u, v, x))
    }

    /// Resolves a weight coordinate `r` in `0..total` to its edge.
    fn edge_at(&self, g: &DynamicGraph, mut r: i64) -> (usize, usize) {
        let mut block = 0usize;
        while r >= self.block_sum[block] {
            r -= self.block_sum[block];
            block += 1;
        }
        let mut v = block * 64;
        while r >= self.row_sum[v] {
            r -= self.row_sum[v];
            v += 1;
        }
        let mut acc = 0i64;
        let mut hit = None;
        for_lower_neighbors(g, v, |u| {
            if hit.is_none() {
                acc += g.codegree(u, v) as i64;
                if acc > r {
                    hit = Some(u);
                }
            }
        });
        let u = hit.unwrap_or_else(|| panic!("index corrupt: bucket {v} underweight"));
        (u, v)
    }

    /// Removes the three edges of `t` from the graph, keeping all weights
    /// consistent: the three slots are zeroed and every surviving edge
    /// whose co-degree dropped loses one unit of weight.
    ///
    /// Edges are removed in canonical pair-id order, so the drop in `Q`
    /// obeys the pre-removal identity
    /// `ΔQ = -(Y[a,b] + Y[a,c] + Y[b,c] - 2)`.
    pub fn apply_removal(&mut self, g: &mut DynamicGraph, t: Triangle) {
        for (x, y) in t.edges() {
            assert!(g.has_edge(x, y), "apply_removal: edge ({x},{y}) of triangle is absent");
        }
        #[cfg(debug_assertions)]
        let expected = {
            let csum: i64 = t.edges().iter().map(|&(x, y)| g.codegree(x, y) as i64).sum();
            self.total - 3 * (csum - 2)
        };
        for (x, y) in t.edges() {
            let slot_weight = g.codegree(x, y) as i64;
            self.sub(x.max(y), slot_weight);
            g.remove_edge_notify(x, y, |a, b| self.sub(a.max(b), 1));
        }
        #[cfg(debug_assertions)]
        debug_assert_eq!(self.total, expected, "ΔQ identity violated");
    }
}

/// Calls `f(u)` for every neighbor `u < v` of `v`, ascending.
#[inline]
pub(crate) fn for_lower_neighbors(g: &DynamicGraph, v: usize, mut f: impl FnMut(usize)) {
    if v == 0 {
        return;
    }
    let row = g.row(v);
    for i in 0..=(v - 1) / 64 {
        let mut bits = row[i];
        if i == v / 64 {
            bits &= (1u64 << (v % 64)) - 1;
        }
        while bits != 0 {
            f(i * 64 + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
}
