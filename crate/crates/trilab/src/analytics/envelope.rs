//! Closed-form trajectories, error envelopes, and density thresholds.
//!
//! All logarithms are natural. The density parameter is `p = 1 - 6i/n²`;
//! each tracked observable follows a deterministic center with a
//! half-width of the form `const · n^a · p^b · Φ` where
//! `Φ = e^(1-p)·ln²n` and the exponent correction `γ̂ = γ - 6/ln n`.

use super::params::ParamSet;

/// Continuous time `t = i/n²`.
pub fn t_of(i: usize, n: usize) -> f64 {
    i as f64 / (n as f64 * n as f64)
}

/// Density parameter `p = 1 - 6i/n²`.
pub fn p_of(i: usize, n: usize) -> f64 {
    1.0 - 6.0 * t_of(i, n)
}

/// Width factor `Φ(p, n) = e^(1-p) · ln²n`.
pub fn phi(p: f64, n: usize) -> f64 {
    let ln = (n as f64).ln();
    (1.0 - p).exp() * ln * ln
}

/// Corrected exponent `γ̂ = γ - 6/ln n`; negative at small n, evaluated as
/// written rather than clamped.
pub fn gamma_hat(n: usize, gamma: f64) -> f64 {
    gamma - 6.0 / (n as f64).ln()
}

/// `Λ = 1/ln²n`, the relative error scale of the envelopes.
pub fn lambda_of(n: usize) -> f64 {
    let ln = (n as f64).ln();
    1.0 / (ln * ln)
}

/// Smallest density at which the envelopes are claimed:
/// `p* = (6α²e²·ln¹⁰n / n)^(1/(4-2γ̂))`. At desk-scale n this exceeds 1,
/// so the tracking window is vacuous unless a floor is configured.
pub fn p_star(n: usize, params: &ParamSet) -> f64 {
    let alpha = params.alpha_f64();
    let ln = (n as f64).ln();
    let gh = gamma_hat(n, params.gamma_f64());
    let base = 6.0 * alpha * alpha * std::f64::consts::E.powi(2) * ln.powi(10) / n as f64;
    base.powf(1.0 / (4.0 - 2.0 * gh))
}

/// Density threshold `p₁ = n^(-1/3) · ln^(5/3) n` below which the tighter
/// triple co-degree width is no longer claimed.
pub fn p_one(n: usize) -> f64 {
    let ln = (n as f64).ln();
    (n as f64).powf(-1.0 / 3.0) * ln.powf(5.0 / 3.0)
}

/// Edge count expressed through the density: `|E| = (n²p - n)/2`.
pub fn edges_at(p: f64, n: usize) -> f64 {
    ((n as f64) * (n as f64) * p - n as f64) / 2.0
}

/// The six monitored ensemble kinds, in deviation-column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvelopeKind {
    Q,
    Yu,
    Yuv,
    Tu,
    Ruv,
    Yuvw,
}

impl EnvelopeKind {
    pub const ALL: [EnvelopeKind; 6] = [
        EnvelopeKind::Q,
        EnvelopeKind::Yu,
        EnvelopeKind::Yuv,
        EnvelopeKind::Tu,
        EnvelopeKind::Ruv,
        EnvelopeKind::Yuvw,
    ];

    pub fn index(self) -> usize {
        match self {
            EnvelopeKind::Q => 0,
            EnvelopeKind::Yu => 1,
            EnvelopeKind::Yuv => 2,
            EnvelopeKind::Tu => 3,
            EnvelopeKind::Ruv => 4,
            EnvelopeKind::Yuvw => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EnvelopeKind::Q => "Q",
            EnvelopeKind::Yu => "Y_u",
            EnvelopeKind::Yuv => "Y_uv",
            EnvelopeKind::Tu => "T_u",
            EnvelopeKind::Ruv => "R_uv",
            EnvelopeKind::Yuvw => "Y_uvw",
        }
    }
}

/// Observed factors feeding the centers that are defined through the
/// current state rather than the bare trajectory: `R_uv` is centered at
/// `p·Y_u·Y_uv` and `T_u` at `p·Y_u²/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ObservedFactors {
    pub y_u: Option<f64>,
    pub y_uv: Option<f64>,
}

/// Center and half-width of the envelope for `kind` at density `p`.
///
/// Half-widths, with `γ̂ = γ - 6/ln n` and `Φ = e^(1-p)·ln²n`:
///
/// | kind  | center        | half-width                |
/// |-------|---------------|---------------------------|
/// | Q     | n³p³/6        | α²·n²·p^(2γ̂-1)·Φ²         |
/// | Y_uv  | np²           | α·n^(1/2)·p^γ̂·Φ           |
/// | R_uv  | p·Y_u·Y_uv    | β·n^(3/2)·p^(2+γ̂)·Φ       |
/// | Y_u   | np            | κ·n^(1/2)·p^(γ̂-1)·Φ       |
/// | T_u   | p·Y_u²/2      | μ·n^(3/2)·p^(1+γ̂)·Φ       |
/// | Y_uvw | np³           | 2·√(n·p³·ln⁵n)            |
pub fn envelope(
    kind: EnvelopeKind,
    p: f64,
    n: usize,
    params: &ParamSet,
    observed: ObservedFactors,
) -> (f64, f64) {
    let nf = n as f64;
    let gh = gamma_hat(n, params.gamma_f64());
    let phi = phi(p, n);
    match kind {
        EnvelopeKind::Q => {
            let a = params.alpha_f64();
            (nf.powi(3) * p.powi(3) / 6.0, a * a * nf * nf * p.powf(2.0 * gh - 1.0) * phi * phi)
        }
        EnvelopeKind::Yuv => {
            (nf * p * p, params.alpha_f64() * nf.sqrt() * p.powf(gh) * phi)
        }
        EnvelopeKind::Ruv => {
            let y_u = observed.y_u.expect("R_uv center needs observed Y_u");
            let y_uv = observed.y_uv.expect("R_uv center needs observed Y_uv");
            (p * y_u * y_uv, params.beta_f64() * nf.powf(1.5) * p.powf(2.0 + gh) * phi)
        }
        EnvelopeKind::Yu => {
            (nf * p, params.kappa_f64() * nf.sqrt() * p.powf(gh - 1.0) * phi)
        }
        EnvelopeKind::Tu => {
            let y_u = observed.y_u.expect("T_u center needs observed Y_u");
            (p * y_u * y_u / 2.0, params.mu_f64() * nf.powf(1.5) * p.powf(1.0 + gh) * phi)
        }
        EnvelopeKind::Yuvw => (nf * p.powi(3), 2.0 * yuvw_strict_half_width(p, n)),
    }
}

/// The tighter triple co-degree half-width `√(n·p³·ln⁵n)`, valid down to
/// `p₁`; the standing envelope uses twice this value.
pub fn yuvw_strict_half_width(p: f64, n: usize) -> f64 {
    let ln = (n as f64).ln();
    (n as f64 * p.powi(3) * ln.powi(5)).sqrt()
}

/// Companion upper envelope for the triangle count:
/// `Q ≤ n³p³/6 + n²p/3`.
pub fn q_upper_companion(p: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf.powi(3) * p.powi(3) / 6.0 + nf * nf * p / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn p_and_t_scaling() {
        assert_eq!(p_of(0, 10), 1.0);
        assert!((p_of(5, 10) - 0.7).abs() < EPS);
        assert!((t_of(5, 10) - 0.05).abs() < EPS);
        // |E| = C(n,2) - 3i = (n²p - n)/2 at n=10, i=5.
        assert!((edges_at(p_of(5, 10), 10) - 30.0).abs() < EPS);
    }

    #[test]
    fn phi_at_full_density_is_log_squared() {
        for n in [10usize, 100, 4000] {
            let ln = (n as f64).ln();
            assert!((phi(1.0, n) - ln * ln).abs() < EPS * ln * ln);
        }
    }

    #[test]
    fn lambda_inverts_phi_at_p_one() {
        for n in [5usize, 50, 500] {
            assert!((lambda_of(n) * phi(1.0, n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_hat_small_n() {
        // n = 403 ≈ e^6 puts the correction near 1.
        let gh = gamma_hat(403, 0.5);
        assert!((gh - (0.5 - 6.0 / 403f64.ln())).abs() < EPS);
        assert!((0.5 - gh - 1.0008).abs() < 1e-3);
        assert!(gh < 0.0);
    }

    #[test]
    fn p_star_vacuous_at_desk_scale() {
        let params = ParamSet::reference_values();
        assert!(p_star(2000, &params) > 1.0);
        assert!(p_one(8) > 1.0);
        // 8^(-1/3)·ln^(5/3) 8 = 0.5·2.0794^(5/3)
        assert!((p_one(8) - 1.6940).abs() < 1e-3);
    }

    #[test]
    fn p_star_asymptotic_ratio_bounded() {
        // p* / (n^{-1/3} ln^{10/3} n) stays bounded over a wide sweep.
        let params = ParamSet::reference_values();
        let mut ratios = Vec::new();
        let mut n = 1_000usize;
        while n <= 1_000_000_000 {
            let ln = (n as f64).ln();
            let scale = (n as f64).powf(-1.0 / 3.0) * ln.powf(10.0 / 3.0);
            ratios.push(p_star(n, &params) / scale);
            n *= 10;
        }
        for r in &ratios {
            assert!(r.is_finite() && *r > 0.0 && *r < 10.0, "unbounded ratio {r}");
        }
    }

    #[test]
    fn yuv_envelope_at_full_density() {
        let params = ParamSet::reference_values();
        let n = 100usize;
        let (center, half) = envelope(EnvelopeKind::Yuv, 1.0, n, &params, ObservedFactors::default());
        let ln = (n as f64).ln();
        assert!((center - 100.0).abs() < EPS);
        assert!((half - 10.0 * ln * ln).abs() < 1e-9);
    }

    #[test]
    fn q_envelope_contains_initial_count() {
        // At p = 1 the true count C(n,3) differs from n³/6 by n²/2 - n/3,
        // far inside the half-width for n = 100.
        let params = ParamSet::reference_values();
        let n = 100usize;
        let (center, half) = envelope(EnvelopeKind::Q, 1.0, n, &params, ObservedFactors::default());
        let q0 = (n * (n - 1) * (n - 2) / 6) as f64;
        assert!((q0 - center).abs() < half);
        assert!(((q0 - center).abs() / half) < 0.01);
    }

    #[test]
    fn yuvw_width_factor_two() {
        let n = 100usize;
        let p = 0.7;
        let params = ParamSet::reference_values();
        let (_, half) = envelope(EnvelopeKind::Yuvw, p, n, &params, ObservedFactors::default());
        assert!((half - 2.0 * yuvw_strict_half_width(p, n)).abs() < EPS);
        let ln = (n as f64).ln();
        assert!((yuvw_strict_half_width(1.0, n) - (n as f64 * ln.powi(5)).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn half_widths_positive_on_unit_interval() {
        let params = ParamSet::reference_values();
        for n in [20usize, 403, 2000] {
            for k in 1..=20 {
                let p = k as f64 / 20.0;
                for kind in EnvelopeKind::ALL {
                    let observed = ObservedFactors { y_u: Some(1.0), y_uv: Some(1.0) };
                    let (_, half) = envelope(kind, p, n, &params, observed);
                    assert!(half > 0.0, "{kind:?} at p={p} n={n}");
                }
            }
        }
    }
}
