//! Per-checkpoint measurement of the whole ensemble against its envelopes.

use super::envelope::{
    self, envelope, gamma_hat, lambda_of, p_of, phi, q_upper_companion, EnvelopeKind,
    ObservedFactors,
};
use super::observables::{compute_r, compute_t};
use super::params::ParamSet;
use crate::graph::DynamicGraph;
use crate::index::TriangleIndex;
use rand::Rng;
use std::collections::HashSet;

/// How many population members each sampled observable measures per
/// checkpoint. Degrees, co-degrees and `T_u` are always measured over
/// their full populations (they are cheap through the maintained tables);
/// `R_uv` pairs and co-degree triples are subsampled because their full
/// populations cost roughly O(n³) per snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingPlan {
    pub pairs: usize,
    pub triples: usize,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan { pairs: 2000, triples: 2000 }
    }
}

/// Everything measured at one checkpoint. Deviations are normalized:
/// `|observed - center| / half_width`, maximized over the measured
/// population, so a value above 1 means the envelope was violated.
#[derive(Debug, Clone)]
pub struct CheckpointRecord {
    pub i: usize,
    pub p: f64,
    pub q: i64,
    /// Max normalized deviation per kind, in [`EnvelopeKind::ALL`] order.
    pub dev: [f64; 6],
    /// Population size measured per kind, same order.
    pub population: [usize; 6],
    /// Bit k set: kind k violated its envelope. Bit 6 set: the companion
    /// upper bound `Q ≤ n³p³/6 + n²p/3` was exceeded.
    pub viol_mask: u32,
    pub gamma_hat: f64,
    pub phi: f64,
    pub lambda: f64,
    /// Deviation of triple co-degrees against the tighter single-factor
    /// width (exactly twice `dev[Yuvw]`).
    pub yuvw_strict_dev: f64,
}

/// Bit set in [`CheckpointRecord::viol_mask`] when the companion upper
/// bound on the triangle count fails.
pub const Q_COMPANION_BIT: u32 = 6;

impl CheckpointRecord {
    pub fn violated(&self, kind: EnvelopeKind) -> bool {
        self.viol_mask >> kind.index() & 1 != 0
    }
}

/// Measures the full ensemble on a read-only snapshot.
///
/// Draw order on the measurement stream: `R` pairs first, then triples,
/// both without replacement.
pub fn checkpoint_snapshot<R: Rng + ?Sized>(
    g: &DynamicGraph,
    index: &TriangleIndex,
    i: usize,
    params: &ParamSet,
    plan: &SamplingPlan,
    rng: &mut R,
) -> CheckpointRecord {
    let n = g.n();
    let p = p_of(i, n);
    let q = index.total_triangles();

    let mut dev = [0.0f64; 6];
    let mut population = [0usize; 6];

    // Q, full knowledge.
    let (q_center, q_half) = envelope(EnvelopeKind::Q, p, n, params, ObservedFactors::default());
    dev[EnvelopeKind::Q.index()] = (q as f64 - q_center).abs() / q_half;
    population[EnvelopeKind::Q.index()] = 1;

    // Degrees, full population.
    let (yu_center, yu_half) = envelope(EnvelopeKind::Yu, p, n, params, ObservedFactors::default());
    let mut max_yu = 0.0f64;
    for u in 0..n {
        max_yu = max_yu.max((g.degree(u) as f64 - yu_center).abs());
    }
    dev[EnvelopeKind::Yu.index()] = max_yu / yu_half;
    population[EnvelopeKind::Yu.index()] = n;

    // Co-degrees, full population, plus the edge-weight sum consistency
    // check against the sampling index in the same pass.
    let (yuv_center, yuv_half) = envelope(EnvelopeKind::Yuv, p, n, params, ObservedFactors::default());
    let table = g.codegree_table();
    let mut max_yuv = 0.0f64;
    let mut edge_weight_sum = 0i64;
    for v in 1..n {
        let row = &table[v * (v - 1) / 2..v * (v - 1) / 2 + v];
        for &c in row {
            max_yuv = max_yuv.max((c as f64 - yuv_center).abs());
        }
        crate::index::for_lower_neighbors(g, v, |u| edge_weight_sum += row[u] as i64);
    }
    assert_eq!(
        edge_weight_sum,
        index.total_weight(),
        "state corrupt: edge co-degree sum disagrees with index total"
    );
    dev[EnvelopeKind::Yuv.index()] = max_yuv / yuv_half;
    population[EnvelopeKind::Yuv.index()] = n * (n - 1) / 2;

    // T_u over every vertex, centered at the observed p·Y_u²/2.
    let tu_half = envelope(
        EnvelopeKind::Tu,
        p,
        n,
        params,
        ObservedFactors { y_u: Some(0.0), y_uv: None },
    )
    .1;
    let mut max_tu = 0.0f64;
    for u in 0..n {
        let t = compute_t(g, u) as f64;
        let center = p * (g.degree(u) as f64).powi(2) / 2.0;
        max_tu = max_tu.max((t - center).abs());
    }
    dev[EnvelopeKind::Tu.index()] = max_tu / tu_half;
    population[EnvelopeKind::Tu.index()] = n;

    // R_uv over sampled ordered pairs.
    let ruv_half = envelope(
        EnvelopeKind::Ruv,
        p,
        n,
        params,
        ObservedFactors { y_u: Some(0.0), y_uv: Some(0.0) },
    )
    .1;
    let pairs = sample_ordered_pairs(n, plan.pairs, rng);
    let mut max_ruv = 0.0f64;
    for &(u, v) in &pairs {
        let r = compute_r(g, u, v) as f64;
        let center = p * g.degree(u) as f64 * g.codegree(u, v) as f64;
        max_ruv = max_ruv.max((r - center).abs());
    }
    dev[EnvelopeKind::Ruv.index()] = max_ruv / ruv_half;
    population[EnvelopeKind::Ruv.index()] = pairs.len();

    // Triple co-degrees over sampled triples.
    let (yuvw_center, yuvw_half) =
        envelope(EnvelopeKind::Yuvw, p, n, params, ObservedFactors::default());
    let triples = sample_triples(n, plan.triples, rng);
    let mut max_yuvw = 0.0f64;
    for &[u, v, w] in &triples {
        max_yuvw = max_yuvw.max((g.triple_codegree(u, v, w) as f64 - yuvw_center).abs());
    }
    dev[EnvelopeKind::Yuvw.index()] = max_yuvw / yuvw_half;
    population[EnvelopeKind::Yuvw.index()] = triples.len();

    let mut viol_mask = 0u32;
    for kind in EnvelopeKind::ALL {
        if dev[kind.index()] > 1.0 {
            viol_mask |= 1 << kind.index();
        }
    }
    if (q as f64) > q_upper_companion(p, n) {
        viol_mask |= 1 << Q_COMPANION_BIT;
    }

    CheckpointRecord {
        i,
        p,
        q,
        dev,
        population,
        viol_mask,
        gamma_hat: gamma_hat(n, params.gamma_f64()),
        phi: phi(p, n),
        lambda: lambda_of(n),
        yuvw_strict_dev: max_yuvw / envelope::yuvw_strict_half_width(p, n),
    }
}

/// Draws `count` distinct ordered pairs `(u, v)`, `u ≠ v`, without
/// replacement; falls back to the full population when it is no larger.
fn sample_ordered_pairs<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let full = n * (n - 1);
    if count >= full {
        let mut all = Vec::with_capacity(full);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    all.push((u, v));
                }
            }
        }
        return all;
    }
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && seen.insert((u, v)) {
            out.push((u, v));
        }
    }
    out
}

/// Draws `count` distinct unordered triples without replacement.
fn sample_triples<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<[usize; 3]> {
    let full = n * (n - 1) * (n - 2) / 6;
    if count >= full {
        let mut all = Vec::with_capacity(full);
        for u in 0..n {
            for v in u + 1..n {
                for w in v + 1..n {
                    all.push([u, v, w]);
                }
            }
        }
        return all;
    }
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut t = [
            rng.random_range(0..n),
            rng.random_range(0..n),
            rng.random_range(0..n),
        ];
        t.sort_unstable();
        if t[0] != t[1] && t[1] != t[2] && seen.insert(t) {
            out.push(t);
        }
    }
    out
}
