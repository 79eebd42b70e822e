//! Envelope-violation reporting over a completed sweep's checkpoint files.

use super::config::SweepConfig;
use super::csv::CheckpointRow;
use crate::analytics::EnvelopeKind;
use std::collections::BTreeMap;
use std::fmt;

/// Violation counts and deviation extremes for one run, restricted to
/// its acceptance window `p ≥ p_floor`.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub n: usize,
    pub seed: u64,
    pub p_floor: f64,
    /// No checkpoint fell inside the window (`p_floor ≥ 1`): the run
    /// certifies nothing and is marked vacuous rather than passing.
    pub vacuous: bool,
    /// Checkpoints inside the window.
    pub checked: usize,
    /// Violations per kind inside the window.
    pub violations: [u32; 6],
    /// Max normalized deviation per kind inside the window.
    pub max_dev: [f64; 6],
}

impl RunReport {
    pub fn total_violations(&self) -> u32 {
        self.violations.iter().sum()
    }
}

/// One point of the per-kind max-deviation trajectory: the largest
/// normalized deviation observed at a given p-grid position across all
/// runs, suitable for plotting the ensemble's self-correction.
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    /// Grid index k, i.e. the crossing of `p = 1 - k·dp`.
    pub grid: usize,
    /// Representative p (largest observed at this grid position).
    pub p: f64,
    pub max_dev: [f64; 6],
}

#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub per_run: Vec<RunReport>,
    /// Max deviation per kind over all non-vacuous windows.
    pub global_max_dev: [f64; 6],
    pub trajectory: Vec<TrajectoryPoint>,
    pub total_violations: u64,
}

impl ViolationReport {
    /// True when at least one checkpoint inside a non-vacuous window
    /// violated an envelope.
    pub fn any_violation(&self) -> bool {
        self.total_violations > 0
    }

    /// True when no run had a usable window at all.
    pub fn all_vacuous(&self) -> bool {
        self.per_run.iter().all(|r| r.vacuous)
    }
}

/// Builds the report. Rows may arrive in any order and from any mix of
/// files; everything is grouped and sorted internally so the output is
/// permutation-invariant.
pub fn violation_report(rows: &[CheckpointRow], config: &SweepConfig) -> ViolationReport {
    let mut by_run: BTreeMap<(usize, u64), Vec<&CheckpointRow>> = BTreeMap::new();
    for row in rows {
        by_run.entry((row.n, row.seed)).or_default().push(row);
    }

    let mut per_run = Vec::with_capacity(by_run.len());
    let mut global_max_dev = [0.0f64; 6];
    let mut trajectory_map: BTreeMap<usize, TrajectoryPoint> = BTreeMap::new();
    let mut total_violations = 0u64;

    for ((n, seed), mut run_rows) in by_run {
        run_rows.sort_by_key(|r| r.i);
        let p_floor = config.resolve_p_floor(n);
        let vacuous = p_floor >= 1.0;
        let mut checked = 0usize;
        let mut violations = [0u32; 6];
        let mut max_dev = [0.0f64; 6];
        for row in run_rows {
            if vacuous || row.p < p_floor {
                continue;
            }
            checked += 1;
            let grid = ((1.0 - row.p) / config.dp + 1e-9).floor() as usize;
            let point = trajectory_map.entry(grid).or_insert(TrajectoryPoint {
                grid,
                p: row.p,
                max_dev: [0.0; 6],
            });
            point.p = point.p.max(row.p);
            for kind in EnvelopeKind::ALL {
                let k = kind.index();
                let d = row.dev[k];
                max_dev[k] = max_dev[k].max(d);
                global_max_dev[k] = global_max_dev[k].max(d);
                point.max_dev[k] = point.max_dev[k].max(d);
                if row.viol_mask >> k & 1 != 0 {
                    violations[k] += 1;
                    total_violations += 1;
                }
            }
        }
        per_run.push(RunReport { n, seed, p_floor, vacuous, checked, violations, max_dev });
    }

    ViolationReport {
        per_run,
        global_max_dev,
        trajectory: trajectory_map.into_values().collect(),
        total_violations,
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "run            window        checked  violations  worst deviation")?;
        for r in &self.per_run {
            let status = if r.vacuous {
                "vacuous (p_floor >= 1)".to_string()
            } else {
                format!("p >= {:.4}", r.p_floor)
            };
            let worst = r
                .max_dev
                .iter()
                .cloned()
                .fold(0.0f64, f64::max);
            writeln!(
                f,
                "n={:<6} s={:<4} {:<22} {:<8} {:<11} {:.3e}",
                r.n,
                r.seed,
                status,
                r.checked,
                r.total_violations(),
                worst
            )?;
        }
        writeln!(f, "max normalized deviation by kind (within windows):")?;
        for kind in EnvelopeKind::ALL {
            writeln!(f, "  {:<6} {:.6e}", kind.label(), self.global_max_dev[kind.index()])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn row(n: usize, seed: u64, i: usize, p: f64, dev: [f64; 6]) -> CheckpointRow {
        let viol_mask = dev
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 1.0)
            .fold(0u32, |m, (k, _)| m | 1 << k);
        CheckpointRow { n, seed, i, p, q: 1, dev, viol_mask, gamma_hat: 0.0, phi: 1.0 }
    }

    fn fixed_floor_config(p_floor: f64) -> SweepConfig {
        SweepConfig {
            n_list: vec![30],
            seeds_per_n: 1,
            p_floor: Some(p_floor),
            dp: 0.1,
            out_dir: PathBuf::from("unused"),
            ..SweepConfig::default()
        }
    }

    #[test]
    fn clean_rows_report_zero_violations() {
        let rows = vec![
            row(30, 0, 0, 1.0, [0.1; 6]),
            row(30, 0, 5, 0.8, [0.2; 6]),
        ];
        let report = violation_report(&rows, &fixed_floor_config(0.5));
        assert_eq!(report.total_violations, 0);
        assert!(!report.any_violation());
        assert_eq!(report.per_run[0].checked, 2);
        assert!((report.global_max_dev[0] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn injected_deviation_is_flagged() {
        let mut dev = [0.1; 6];
        dev[2] = 1.5; // co-degree envelope broken
        let rows = vec![row(30, 0, 5, 0.8, dev)];
        let report = violation_report(&rows, &fixed_floor_config(0.5));
        assert!(report.any_violation());
        assert_eq!(report.per_run[0].violations[2], 1);
    }

    #[test]
    fn below_floor_rows_are_excluded() {
        let mut dev = [0.0; 6];
        dev[0] = 9.0;
        let rows = vec![row(30, 0, 40, 0.2, dev)];
        let report = violation_report(&rows, &fixed_floor_config(0.5));
        assert!(!report.any_violation());
        assert_eq!(report.per_run[0].checked, 0);
    }

    #[test]
    fn vacuous_window_marked_not_passing() {
        let rows = vec![row(30, 0, 0, 1.0, [0.0; 6])];
        let config = SweepConfig {
            p_floor: None, // auto: p* dominates and exceeds 1 at n=30
            ..fixed_floor_config(0.0)
        };
        let report = violation_report(&rows, &config);
        assert!(report.per_run[0].vacuous);
        assert!(report.all_vacuous());
        assert!(!report.any_violation());
    }

    #[test]
    fn report_is_permutation_invariant() {
        let rows = vec![
            row(30, 0, 0, 1.0, [0.1; 6]),
            row(30, 0, 5, 0.9, [0.3; 6]),
            row(30, 1, 0, 1.0, [0.2; 6]),
        ];
        let mut reversed = rows.clone();
        reversed.reverse();
        let a = violation_report(&rows, &fixed_floor_config(0.5));
        let b = violation_report(&reversed, &fixed_floor_config(0.5));
        assert_eq!(a.global_max_dev, b.global_max_dev);
        assert_eq!(a.per_run.len(), b.per_run.len());
        for (x, y) in a.per_run.iter().zip(&b.per_run) {
            assert_eq!((x.n, x.seed, x.checked), (y.n, y.seed, y.checked));
            assert_eq!(x.max_dev, y.max_dev);
        }
    }
}
