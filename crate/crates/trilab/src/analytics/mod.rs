//! Closed-form quantities, expensive observables, exact drift oracles,
//! and the per-checkpoint ensemble measurement.

mod bounds;
mod checkpoint;
mod envelope;
mod observables;
mod oracles;
mod params;

pub use bounds::{bilinear_sum_bound_check, freedman_tail};
pub use checkpoint::{checkpoint_snapshot, CheckpointRecord, SamplingPlan, Q_COMPANION_BIT};
pub use envelope::{
    edges_at, envelope, gamma_hat, lambda_of, p_of, p_one, p_star, phi, q_upper_companion, t_of,
    yuvw_strict_half_width, EnvelopeKind, ObservedFactors,
};
pub use observables::{compute_r, compute_t, compute_t_brute, r_identity_route, sum_codegrees_over_edges};
pub use oracles::{
    decomposition_identity_check, drift_oracle_q, drift_oracle_yu, drift_oracle_yuv,
    for_each_reachable, formula_yuv,
};
pub use params::{parse_rational, Condition, ConstantsReport, ParamError, ParamSet, Rat};
