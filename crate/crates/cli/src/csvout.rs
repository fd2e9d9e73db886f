//! Minimal CSV output for field scans: header row `x1,...,xm,q`, LF line
//! endings, shortest round-trip float formatting, `inf` sentinel at the
//! singular node.

use crate::config::ScanSection;
use fasol::fundsol::{evaluate_q, DeltaVector, ProblemConfig};
use fasol::{Error, Result};

/// Outcome of writing a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub rows_written: usize,
    pub rows_skipped: usize,
}

/// Shortest round-trip decimal form; infinities render as `inf`/`-inf`.
pub fn format_value(v: f64) -> String {
    format!("{v}")
}

/// Evaluate `q` over the grid and render the CSV into a string.
///
/// Grid nodes are visited in row-major order with the last axis varying
/// fastest. Nodes violating the domain (a singular coordinate at or below
/// zero) are skipped and counted; the singular node `x = x0` is emitted with
/// the `inf` sentinel in the value column.
pub fn scan_csv(
    cfg: &ProblemConfig,
    x0: &[f64],
    scan: &ScanSection,
    d: &DeltaVector,
    gamma: f64,
    tol: f64,
) -> Result<(String, ScanSummary)> {
    let m = cfg.m();
    let mut out = String::new();
    for i in 1..=m {
        out.push_str(&format!("x{i},"));
    }
    out.push_str("q\n");

    let axes: Vec<Vec<f64>> = scan
        .ranges
        .iter()
        .zip(&scan.counts)
        .map(|(&[lo, hi], &cnt)| {
            (0..cnt)
                .map(|k| {
                    if cnt == 1 {
                        lo
                    } else {
                        lo + (hi - lo) * k as f64 / (cnt - 1) as f64
                    }
                })
                .collect()
        })
        .collect();

    let mut idx = vec![0usize; m];
    let mut summary = ScanSummary {
        rows_written: 0,
        rows_skipped: 0,
    };
    loop {
        let x: Vec<f64> = (0..m).map(|i| axes[i][idx[i]]).collect();
        let in_domain = x.iter().take(cfg.n()).all(|&v| v > 0.0);
        if !in_domain {
            summary.rows_skipped += 1;
        } else {
            let value = match evaluate_q(&x, x0, cfg, d, gamma, tol) {
                Ok(r) => r.value,
                Err(Error::SingularPoint) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            for v in &x {
                out.push_str(&format_value(*v));
                out.push(',');
            }
            out.push_str(&format_value(value));
            out.push('\n');
            summary.rows_written += 1;
        }

        // Advance the multi-index, last axis fastest.
        let mut axis = m;
        loop {
            if axis == 0 {
                return Ok((out, summary));
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < axes[axis].len() {
                break;
            }
            idx[axis] = 0;
        }
    }
}
