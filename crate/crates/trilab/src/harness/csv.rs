//! Checkpoint CSV persistence.
//!
//! One row per checkpoint with the fixed column order
//!
//! ```text
//! n,seed,i,p,Q,dev_Q,dev_Yu,dev_Yuv,dev_Tu,dev_Ruv,dev_Yuvw,viol_mask,gamma_hat,phi
//! ```
//!
//! Floats are serialized with 17 significant digits, which round-trips
//! every f64 bit pattern exactly.

use crate::analytics::CheckpointRecord;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use thiserror::Error;

pub const CSV_HEADER: &str =
    "n,seed,i,p,Q,dev_Q,dev_Yu,dev_Yuv,dev_Tu,dev_Ruv,dev_Yuvw,viol_mask,gamma_hat,phi";

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Schema { path: String, line: usize, message: String },
}

/// One parsed checkpoint row.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointRow {
    pub n: usize,
    pub seed: u64,
    pub i: usize,
    pub p: f64,
    pub q: i64,
    /// dev_Q, dev_Yu, dev_Yuv, dev_Tu, dev_Ruv, dev_Yuvw.
    pub dev: [f64; 6],
    pub viol_mask: u32,
    pub gamma_hat: f64,
    pub phi: f64,
}

/// 17 significant digits; parses back to the identical f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders one run's checkpoints in schema order.
pub fn render_checkpoints(n: usize, seed: u64, records: &[CheckpointRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            n,
            seed,
            r.i,
            fmt_f64(r.p),
            r.q,
            fmt_f64(r.dev[0]),
            fmt_f64(r.dev[1]),
            fmt_f64(r.dev[2]),
            fmt_f64(r.dev[3]),
            fmt_f64(r.dev[4]),
            fmt_f64(r.dev[5]),
            r.viol_mask,
            fmt_f64(r.gamma_hat),
            fmt_f64(r.phi),
        );
        out.push('\n');
    }
    out
}

pub fn write_checkpoints(
    path: &Path,
    n: usize,
    seed: u64,
    records: &[CheckpointRecord],
) -> Result<(), CsvError> {
    fs::write(path, render_checkpoints(n, seed, records)).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_checkpoints(path: &Path) -> Result<Vec<CheckpointRow>, CsvError> {
    let text = fs::read_to_string(path).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_checkpoints(&text, &path.display().to_string())
}

pub fn parse_checkpoints(text: &str, path: &str) -> Result<Vec<CheckpointRow>, CsvError> {
    let schema = |line: usize, message: String| CsvError::Schema {
        path: path.to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(schema(1, format!("unexpected header {header:?}")));
        }
        None => return Err(schema(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(schema(idx + 1, format!("expected 14 fields, got {}", fields.len())));
        }
        let mut col = 0usize;
        macro_rules! parse {
            ($ty:ty) => {{
                let field = fields[col];
                col += 1;
                field
                    .parse::<$ty>()
                    .map_err(|e| schema(idx + 1, format!("column {col}: {e}")))?
            }};
        }
        let n = parse!(usize);
        let seed = parse!(u64);
        let i = parse!(usize);
        let p = parse!(f64);
        let q = parse!(i64);
        let dev = [
            parse!(f64),
            parse!(f64),
            parse!(f64),
            parse!(f64),
            parse!(f64),
            parse!(f64),
        ];
        let viol_mask = parse!(u32);
        let gamma_hat = parse!(f64);
        let phi = parse!(f64);
        rows.push(CheckpointRow { n, seed, i, p, q, dev, viol_mask, gamma_hat, phi });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{checkpoint_snapshot, ParamSet, SamplingPlan};
    use crate::process::{CheckpointPolicy, ProcessState};
    use crate::rng;

    fn some_records(n: usize, seed: u64) -> Vec<CheckpointRecord> {
        let mut st = ProcessState::new(n, seed).unwrap();
        let params = ParamSet::reference_values();
        let plan = SamplingPlan { pairs: 30, triples: 30 };
        let mut mrng = rng::measurement_stream(seed);
        let mut records = Vec::new();
        st.run_to_completion(CheckpointPolicy::every(0.1), |s| {
            records.push(checkpoint_snapshot(s.graph(), s.index(), s.steps(), &params, &plan, &mut mrng));
        });
        records
    }

    #[test]
    fn round_trip_preserves_every_bit() {
        let records = some_records(24, 3);
        let text = render_checkpoints(24, 3, &records);
        let rows = parse_checkpoints(&text, "mem").unwrap();
        assert_eq!(rows.len(), records.len());
        for (row, rec) in rows.iter().zip(&records) {
            assert_eq!(row.n, 24);
            assert_eq!(row.seed, 3);
            assert_eq!(row.i, rec.i);
            assert_eq!(row.p.to_bits(), rec.p.to_bits());
            assert_eq!(row.q, rec.q);
            for k in 0..6 {
                assert_eq!(row.dev[k].to_bits(), rec.dev[k].to_bits());
            }
            assert_eq!(row.viol_mask, rec.viol_mask);
            assert_eq!(row.gamma_hat.to_bits(), rec.gamma_hat.to_bits());
            assert_eq!(row.phi.to_bits(), rec.phi.to_bits());
        }
    }

    #[test]
    fn header_mismatch_rejected() {
        assert!(matches!(
            parse_checkpoints("bogus\n1,2\n", "mem"),
            Err(CsvError::Schema { line: 1, .. })
        ));
    }

    #[test]
    fn field_count_mismatch_rejected() {
        let text = format!("{CSV_HEADER}\n1,2,3\n");
        assert!(matches!(
            parse_checkpoints(&text, "mem"),
            Err(CsvError::Schema { line: 2, .. })
        ));
    }
}
