//! TOML run configuration shared by the CLI subcommands.
//!
//! Plain values come before tables so the serialized form is valid TOML and
//! a file written by `--dump-config` re-parses to an identical value.

use fasol::fundsol::ProblemConfig;
use fasol::lauricella::LauricellaParams;
use fasol::{Error, Result};
use serde::{Deserialize, Serialize};

fn default_gamma() -> f64 {
    1.0
}

fn default_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Singular point of the fundamental solution, length `m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    /// Multiplicative constant of the solution.
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Target relative tolerance of series evaluations.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lauricella: Option<LauricellaSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    /// Space dimension (number of coordinates).
    pub m: usize,
    /// Number of singular axes (first `n` coordinates).
    pub n: usize,
    /// Operator coefficients, length `n`, each in (0, 1/2).
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    /// Inclusive `[lo, hi]` range per axis, length `m`.
    pub ranges: Vec<[f64; 2]>,
    /// Node count per axis, length `m`; a count of 1 pins the axis at `lo`.
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LauricellaSection {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub x: Vec<f64>,
}

impl RunConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| Error::Parameter(format!("cannot parse {}: {e}", path.display())))?;
        cfg.validate_common()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks that apply regardless of subcommand.
    fn validate_common(&self) -> Result<()> {
        if !(self.gamma.is_finite()) {
            return Err(Error::Parameter(format!(
                "gamma must be finite, got {}",
                self.gamma
            )));
        }
        if !(self.tol > 0.0 && self.tol < 0.1) {
            return Err(Error::Parameter(format!(
                "tol must lie in (0, 0.1), got {}",
                self.tol
            )));
        }
        Ok(())
    }

    /// The problem section as a validated core configuration.
    pub fn problem_config(&self) -> Result<ProblemConfig> {
        let p = self
            .problem
            .as_ref()
            .ok_or_else(|| Error::Parameter("config is missing the [problem] section".into()))?;
        ProblemConfig::new(p.m, p.n, p.alpha.clone())
    }

    /// The singular point, validated against the problem section.
    pub fn x0_checked(&self, cfg: &ProblemConfig) -> Result<Vec<f64>> {
        let x0 = self
            .x0
            .as_ref()
            .ok_or_else(|| Error::Parameter("config is missing x0".into()))?;
        cfg.validate_point(x0, "x0")?;
        Ok(x0.clone())
    }

    /// The scan section, validated against the problem section.
    pub fn scan_checked(&self, cfg: &ProblemConfig) -> Result<ScanSection> {
        let s = self
            .scan
            .as_ref()
            .ok_or_else(|| Error::Parameter("config is missing the [scan] section".into()))?;
        if s.ranges.len() != cfg.m() || s.counts.len() != cfg.m() {
            return Err(Error::Parameter(format!(
                "scan ranges and counts must each have m = {} entries",
                cfg.m()
            )));
        }
        for (i, (&[lo, hi], &cnt)) in s.ranges.iter().zip(&s.counts).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Parameter(format!(
                    "scan range for axis {} must satisfy lo <= hi, got [{lo}, {hi}]",
                    i + 1
                )));
            }
            if cnt == 0 {
                return Err(Error::Parameter(format!(
                    "scan count for axis {} must be at least 1",
                    i + 1
                )));
            }
            if i < cfg.n() && lo <= 0.0 {
                return Err(Error::Parameter(format!(
                    "scan range for singular axis {} must start above 0, got {lo}",
                    i + 1
                )));
            }
        }
        Ok(s.clone())
    }

    /// The Lauricella section as core parameters.
    pub fn lauricella_params(&self) -> Result<LauricellaParams> {
        let l = self
            .lauricella
            .as_ref()
            .ok_or_else(|| Error::Parameter("config is missing the [lauricella] section".into()))?;
        let p = LauricellaParams::new(l.a, l.b.clone(), l.c.clone(), l.x.clone());
        p.validate()?;
        Ok(p)
    }
}

/// A complete example configuration; printed by `--dump-config`.
pub fn example_config() -> RunConfig {
    RunConfig {
        x0: Some(vec![1.0, 0.5, 0.5]),
        gamma: default_gamma(),
        tol: default_tol(),
        problem: Some(ProblemSection {
            m: 3,
            n: 1,
            alpha: vec![0.25],
        }),
        scan: Some(ScanSection {
            ranges: vec![[0.2, 1.8], [0.2, 1.2], [0.5, 0.5]],
            counts: vec![5, 4, 1],
        }),
        lauricella: Some(LauricellaSection {
            a: 0.9,
            b: vec![0.4, 0.8, 0.6],
            c: vec![1.1, 0.7, 1.4],
            x: vec![-0.3, -0.1, -0.2],
        }),
    }
}
