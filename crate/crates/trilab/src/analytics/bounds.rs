//! Numeric evaluators for the two concentration tools the monitors lean
//! on: the supermartingale tail bound and the bilinear averaging bound.

/// Tail probability bound `exp(-s² / (2(v + B·s)))` for a supermartingale
/// with one-step changes at most `B` and accumulated conditional variance
/// at most `v`, evaluated at deviation `s`.
pub fn freedman_tail(s: f64, v: f64, b: f64) -> f64 {
    assert!(s > 0.0 && v > 0.0 && b > 0.0, "freedman_tail needs positive arguments");
    (-s * s / (2.0 * (v + b * s))).exp()
}

/// Checks the averaging bound
/// `|Σ xᵢyᵢ - (Σxᵢ)(Σyᵢ)/|I|| ≤ |I|·δ₁·δ₂`
/// where `δ₁, δ₂` are the spreads `max - min` of the two sequences.
///
/// The inequality is exact over the reals; a relative tolerance scaled to
/// the summands absorbs floating-point rounding so that borderline-equal
/// instances (e.g. constant sequences) still report `true`.
pub fn bilinear_sum_bound_check(xs: &[f64], ys: &[f64]) -> bool {
    assert_eq!(xs.len(), ys.len(), "sequences must have equal length");
    assert!(!xs.is_empty(), "sequences must be non-empty");
    let len = xs.len() as f64;
    let sum_x: f64 = xs.iter().sum();
    let sum_y: f64 = ys.iter().sum();
    let sum_xy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let lhs = (sum_xy - sum_x * sum_y / len).abs();

    let spread = |v: &[f64]| {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in v {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        hi - lo
    };
    let rhs = len * spread(xs) * spread(ys);

    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let tol = 64.0 * f64::EPSILON * len * (1.0 + max_abs(xs) * max_abs(ys));
    lhs <= rhs + tol
}
