//! Executes a grid of runs and persists one checkpoint CSV per run plus
//! a single summary JSON for the whole sweep.
//!
//! Runs are embarrassingly parallel: a fixed worker pool pulls
//! `(n, seed)` jobs off a shared cursor, and since every run's output is
//! keyed by `(n, seed)` and every run derives its randomness from its own
//! seed, the scheduling order cannot affect a single output byte.

use super::config::SweepConfig;
use super::csv;
use crate::analytics::{checkpoint_snapshot, CheckpointRecord};
use crate::process::{CheckpointPolicy, ProcessState, RunSummary};
use crate::rng;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] super::config::ConfigError),
    #[error("cannot create output directory {path}: {source}")]
    OutDir {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub const SUMMARY_FILENAME: &str = "sweep_summary.json";

/// The sweep's summary JSON: version, config echo, and one entry per run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub version: String,
    pub config: SweepConfig,
    pub runs: Vec<RunSummary>,
}

/// Result of a sweep. `failures` lists runs whose outputs could not be
/// persisted; they do not abort the remaining runs.
#[derive(Debug)]
pub struct SweepOutcome {
    pub summary: SweepSummary,
    pub summary_path: PathBuf,
    pub failures: Vec<(usize, u64, String)>,
}

/// Executes one run and measures the ensemble at every checkpoint.
pub fn run_one(n: usize, seed: u64, config: &SweepConfig) -> (RunSummary, Vec<CheckpointRecord>) {
    let mut state = ProcessState::new(n, seed).expect("n validated by config");
    let params = config.params.clone();
    let plan = config.sampling_plan();
    let mut measure = rng::measurement_stream(seed);
    let mut records = Vec::new();
    let summary = state.run_to_completion(CheckpointPolicy::every(config.dp), |s| {
        records.push(checkpoint_snapshot(s.graph(), s.index(), s.steps(), &params, &plan, &mut measure));
    });
    (summary, records)
}

/// Runs the whole grid with `config.jobs` workers and persists all
/// outputs under `config.out_dir`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome, SweepError> {
    config.validate()?;
    fs::create_dir_all(&config.out_dir).map_err(|source| SweepError::OutDir {
        path: config.out_dir.display().to_string(),
        source,
    })?;

    let jobs: Vec<(usize, u64)> = config
        .n_list
        .iter()
        .flat_map(|&n| (0..config.seeds_per_n).map(move |s| (n, s)))
        .collect();

    let cursor = AtomicUsize::new(0);
    let results: Mutex<Vec<RunSummary>> = Mutex::new(Vec::with_capacity(jobs.len()));
    let failures: Mutex<Vec<(usize, u64, String)>> = Mutex::new(Vec::new());

    let workers = config.jobs.min(jobs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = cursor.fetch_add(1, Ordering::Relaxed);
                if k >= jobs.len() {
                    break;
                }
                let (n, seed) = jobs[k];
                let (summary, records) = run_one(n, seed, config);
                let path = config.out_dir.join(SweepConfig::checkpoint_filename(n, seed));
                match csv::write_checkpoints(&path, n, seed, &records) {
                    Ok(()) => results.lock().unwrap().push(summary),
                    Err(e) => failures.lock().unwrap().push((n, seed, e.to_string())),
                }
            });
        }
    });

    let mut runs = results.into_inner().unwrap();
    runs.sort_by_key(|r| (r.n, r.seed));
    let summary = SweepSummary {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        runs,
    };
    let summary_path = config.out_dir.join(SUMMARY_FILENAME);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(&summary_path, json).map_err(|source| SweepError::Write {
        path: summary_path.display().to_string(),
        source,
    })?;

    Ok(SweepOutcome {
        summary,
        summary_path,
        failures: failures.into_inner().unwrap(),
    })
}

/// Loads a sweep summary back from its directory.
pub fn read_summary(dir: &Path) -> Result<SweepSummary, String> {
    let path = dir.join(SUMMARY_FILENAME);
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::TempDir;

    fn tiny_config(dir: &Path) -> SweepConfig {
        SweepConfig {
            n_list: vec![20, 30],
            seeds_per_n: 2,
            dp: 0.05,
            pairs: 40,
            triples: 40,
            out_dir: dir.to_path_buf(),
            jobs: 2,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn sweep_writes_expected_files() {
        let tmp = TempDir::new().unwrap();
        let config = tiny_config(tmp.path());
        let outcome = run_sweep(&config).unwrap();
        assert!(outcome.failures.is_empty());
        assert_eq!(outcome.summary.runs.len(), 4);
        for run in &outcome.summary.runs {
            assert_eq!(run.final_edges, run.n * (run.n - 1) / 2 - 3 * run.m);
            let path = tmp.path().join(SweepConfig::checkpoint_filename(run.n, run.seed));
            assert!(path.exists());
        }
        let loaded = read_summary(tmp.path()).unwrap();
        assert_eq!(loaded.runs, outcome.summary.runs);
    }

    #[test]
    fn reruns_are_byte_identical_modulo_wall_time() {
        let tmp_a = TempDir::new().unwrap();
        let tmp_b = TempDir::new().unwrap();
        let out_a = run_sweep(&tiny_config(tmp_a.path())).unwrap();
        let out_b = run_sweep(&tiny_config(tmp_b.path())).unwrap();
        for run in &out_a.summary.runs {
            let name = SweepConfig::checkpoint_filename(run.n, run.seed);
            let a = fs::read(tmp_a.path().join(&name)).unwrap();
            let b = fs::read(tmp_b.path().join(&name)).unwrap();
            assert_eq!(a, b, "checkpoint CSV differs for {name}");
        }
        // Statistical fields agree; wall_ms is the only timing field.
        for (a, b) in out_a.summary.runs.iter().zip(&out_b.summary.runs) {
            assert_eq!((a.n, a.seed, a.m, a.final_edges), (b.n, b.seed, b.m, b.final_edges));
        }
    }

    #[test]
    fn scheduling_does_not_change_outputs() {
        let tmp_serial = TempDir::new().unwrap();
        let tmp_parallel = TempDir::new().unwrap();
        let serial = SweepConfig { jobs: 1, ..tiny_config(tmp_serial.path()) };
        let parallel = SweepConfig { jobs: 4, ..tiny_config(tmp_parallel.path()) };
        run_sweep(&serial).unwrap();
        run_sweep(&parallel).unwrap();
        for n in [20usize, 30] {
            for seed in 0..2u64 {
                let name = SweepConfig::checkpoint_filename(n, seed);
                let a = fs::read(tmp_serial.path().join(&name)).unwrap();
                let b = fs::read(tmp_parallel.path().join(&name)).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}
