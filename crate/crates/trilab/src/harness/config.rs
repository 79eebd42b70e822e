//! Sweep configuration: the grid of runs, the tracking constants, and
//! the envelope acceptance window.

use crate::analytics::{p_star, ParamSet, SamplingPlan};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("n_list must be non-empty and strictly ascending")]
    BadNList,
    #[error("seeds_per_n must be at least 1")]
    NoSeeds,
    #[error("checkpoint spacing dp must lie in (0, 1), got {0}")]
    BadDp(f64),
    #[error("jobs must be at least 1")]
    NoJobs,
}

/// Configuration of one sweep. Serialized verbatim into the sweep's
/// summary JSON so every output directory is self-describing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Ascending list of graph sizes.
    pub n_list: Vec<usize>,
    /// Runs per size, using seeds `0..seeds_per_n`.
    pub seeds_per_n: u64,
    pub params: ParamSet,
    /// Checkpoint grid spacing in p-space.
    pub dp: f64,
    /// `R_uv` pairs sampled per checkpoint.
    pub pairs: usize,
    /// Co-degree triples sampled per checkpoint.
    pub triples: usize,
    /// Envelope acceptance floor. `None` selects the default policy
    /// `max(p*, n^{-1/3})`, which at desk-scale n exceeds 1 and therefore
    /// marks runs as vacuous; set an explicit floor (e.g. `n^{-1/3}`) to
    /// obtain a non-empty acceptance window.
    #[serde(default)]
    pub p_floor: Option<f64>,
    pub out_dir: PathBuf,
    /// Worker threads; runs are embarrassingly parallel.
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_list: vec![250, 500, 1000, 2000, 4000],
            seeds_per_n: 5,
            params: ParamSet::reference_values(),
            dp: 0.01,
            pairs: 2000,
            triples: 2000,
            p_floor: None,
            out_dir: PathBuf::from("trilab-out"),
            jobs: 4,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_list.is_empty() || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::BadNList);
        }
        if self.seeds_per_n == 0 {
            return Err(ConfigError::NoSeeds);
        }
        if !(self.dp > 0.0 && self.dp < 1.0) {
            return Err(ConfigError::BadDp(self.dp));
        }
        if self.jobs == 0 {
            return Err(ConfigError::NoJobs);
        }
        Ok(())
    }

    pub fn sampling_plan(&self) -> SamplingPlan {
        SamplingPlan { pairs: self.pairs, triples: self.triples }
    }

    /// The acceptance floor for size `n`: the configured value, or the
    /// default `max(p*, n^{-1/3})`.
    pub fn resolve_p_floor(&self, n: usize) -> f64 {
        self.p_floor
            .unwrap_or_else(|| p_star(n, &self.params).max((n as f64).powf(-1.0 / 3.0)))
    }

    /// A window is vacuous when its floor is at or above the starting
    /// density 1; such runs cannot certify anything.
    pub fn window_vacuous(&self, n: usize) -> bool {
        self.resolve_p_floor(n) >= 1.0
    }

    /// Checkpoint CSV filename for one run, fixed as
    /// `checkpoints_n{n}_s{seed}.csv`.
    pub fn checkpoint_filename(n: usize, seed: u64) -> String {
        format!("checkpoints_n{n}_s{seed}.csv")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let c = SweepConfig::default();
        assert!(c.validate().is_ok());
        assert_eq!(c.n_list, vec![250, 500, 1000, 2000, 4000]);
        assert_eq!(c.seeds_per_n, 5);
    }

    #[test]
    fn validation_catches_bad_fields() {
        let mut c = SweepConfig::default();
        c.n_list = vec![100, 100];
        assert!(matches!(c.validate(), Err(ConfigError::BadNList)));
        c = SweepConfig::default();
        c.dp = 1.5;
        assert!(matches!(c.validate(), Err(ConfigError::BadDp(_))));
        c = SweepConfig::default();
        c.seeds_per_n = 0;
        assert!(matches!(c.validate(), Err(ConfigError::NoSeeds)));
    }

    #[test]
    fn default_floor_is_vacuous_at_desk_scale() {
        let c = SweepConfig::default();
        assert!(c.window_vacuous(2000));
        let fixed = SweepConfig { p_floor: Some((2000f64).powf(-1.0 / 3.0)), ..SweepConfig::default() };
        assert!(!fixed.window_vacuous(2000));
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = SweepConfig::default();
        let json = serde_json::to_string_pretty(&c).unwrap();
        let back: SweepConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.n_list, c.n_list);
        assert_eq!(back.params, c.params);
        assert_eq!(back.p_floor, None);
    }
}
