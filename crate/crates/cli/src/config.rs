//! JSON run configuration.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use subradiance_core::analysis::ClassThresholds;
use subradiance_core::eig::SolverMode;

/// Inclusive integer range.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IntRange {
    /// First value.
    pub start: usize,
    /// Last value (inclusive).
    pub end: usize,
    /// Increment, default 1.
    #[serde(default)]
    pub step: Option<usize>,
}

/// Inclusive real range.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FloatRange {
    /// First value.
    pub start: f64,
    /// Last value (inclusive up to rounding).
    pub end: f64,
    /// Increment.
    pub step: f64,
}

/// Explicit list or range of emitter counts.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum IntSpec {
    /// Explicit values.
    List(Vec<usize>),
    /// Range.
    Range(IntRange),
}

impl IntSpec {
    /// Expanded values.
    pub fn values(&self) -> Vec<usize> {
        match self {
            IntSpec::List(v) => v.clone(),
            IntSpec::Range(r) => (r.start..=r.end).step_by(r.step.unwrap_or(1).max(1)).collect(),
        }
    }
}

/// Explicit list or range of reals.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FloatSpec {
    /// Explicit values.
    List(Vec<f64>),
    /// Range.
    Range(FloatRange),
}

impl FloatSpec {
    /// Expanded values; ranges are generated by index to avoid drift.
    pub fn values(&self) -> Vec<f64> {
        match self {
            FloatSpec::List(v) => v.clone(),
            FloatSpec::Range(r) => {
                if !(r.step > 0.0) {
                    return vec![r.start];
                }
                let count = ((r.end - r.start) / r.step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| r.start + i as f64 * r.step).collect()
            }
        }
    }
}

/// Positional disorder ensemble.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    /// Offset amplitudes `δ` in units of `d`; offsets are uniform in `[−δ, δ]d`.
    #[serde(default)]
    pub amplitudes: Option<Vec<f64>>,
    /// Samples per amplitude.
    #[serde(default)]
    pub samples: Option<usize>,
    /// Ensemble seed.
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Defect sites: `"center"`, `"scan"` or explicit one-based sites.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DefectSites {
    /// `"center"` or `"scan"`.
    Named(String),
    /// One-based sites.
    List(Vec<usize>),
}

/// Coupling kernel selection.
#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// One-dimensional waveguide.
    Waveguide,
    /// Free-space dipoles polarised perpendicular to the chain.
    Transverse,
    /// Free-space dipoles polarised along the chain.
    Parallel,
}

/// Classification thresholds.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    /// Dimer eigenvalue window in units of Γ.
    #[serde(default)]
    pub eigenvalue_window: Option<f64>,
    /// Fermionic overlap threshold.
    #[serde(default)]
    pub overlap: Option<f64>,
    /// K-marginal concentration threshold.
    #[serde(default)]
    pub k_concentration: Option<f64>,
}

/// Run configuration. Every key is optional; commands fill desk-scale defaults.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Experiment name; must match the subcommand when present.
    #[serde(default)]
    pub experiment: Option<String>,
    /// Emitter counts.
    #[serde(default)]
    pub n: Option<IntSpec>,
    /// `k₁D·d` in units of π.
    #[serde(default)]
    pub kd: Option<FloatSpec>,
    /// Waveguide decay rate Γ₁D.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// `dense`, `si-direct` or `si-matfree`.
    #[serde(default)]
    pub solver: Option<String>,
    /// Eigenpair residual tolerance.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Eigenpairs per targeted solve.
    #[serde(default)]
    pub count: Option<usize>,
    /// Seed for start vectors and sampling.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Disorder ensemble.
    #[serde(default)]
    pub disorder: Option<DisorderConfig>,
    /// Defect sites.
    #[serde(default)]
    pub defect_sites: Option<DefectSites>,
    /// Coupling kernels.
    #[serde(default)]
    pub kernel: Option<Vec<KernelKind>>,
    /// Lattice constant in units of the resonant wavelength (free space).
    #[serde(default)]
    pub separation: Option<Vec<f64>>,
    /// Write eigenvector dumps.
    #[serde(default)]
    pub dump_vectors: Option<bool>,
    /// Output directory.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Classification thresholds.
    #[serde(default)]
    pub thresholds: Option<ThresholdConfig>,
    /// Smallest N entering power-law fits.
    #[serde(default)]
    pub fit_min_n: Option<usize>,
}

impl RunConfig {
    /// Parses a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).context("invalid run configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text)
    }

    /// Checks ranges that do not depend on the experiment.
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = &self.n {
            let v = n.values();
            if v.is_empty() {
                bail!("empty N list");
            }
            if let Some(&bad) = v.iter().find(|&&x| x < 2) {
                bail!("N = {bad} is below 2");
            }
        }
        if let Some(kd) = &self.kd {
            let v = kd.values();
            if v.is_empty() {
                bail!("empty kd list");
            }
            if let Some(&bad) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                bail!("kd = {bad}π must be positive");
            }
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0 && g.is_finite()) {
                bail!("gamma must be positive");
            }
        }
        if let Some(s) = &self.solver {
            parse_solver(s)?;
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                bail!("tol must be positive");
            }
        }
        if let Some(c) = self.count {
            if c == 0 {
                bail!("count must be positive");
            }
        }
        if let Some(d) = &self.disorder {
            if let Some(a) = &d.amplitudes {
                if let Some(&bad) = a.iter().find(|x| !(**x >= 0.0 && **x < 0.5)) {
                    bail!("disorder amplitude {bad} outside [0, 0.5)");
                }
            }
            if d.samples == Some(0) {
                bail!("disorder needs at least one sample");
            }
        }
        if let Some(DefectSites::Named(s)) = &self.defect_sites {
            if s != "center" && s != "scan" {
                bail!("defect_sites must be \"center\", \"scan\" or a list");
            }
        }
        if let Some(sep) = &self.separation {
            if let Some(&bad) = sep.iter().find(|x| !(**x > 0.0)) {
                bail!("separation {bad} must be positive");
            }
        }
        Ok(())
    }

    /// Thresholds with defaults filled in.
    pub fn thresholds(&self) -> ClassThresholds {
        let mut t = ClassThresholds::default();
        if let Some(c) = &self.thresholds {
            t.eigenvalue_window = c.eigenvalue_window.unwrap_or(t.eigenvalue_window);
            t.overlap = c.overlap.unwrap_or(t.overlap);
            t.k_concentration = c.k_concentration.unwrap_or(t.k_concentration);
        }
        t
    }
}

/// Parses a solver name.
pub fn parse_solver(name: &str) -> Result<SolverMode> {
    Ok(match name {
        "dense" => SolverMode::DenseAll,
        "si-direct" => SolverMode::ShiftInvertDirect,
        "si-matfree" => SolverMode::ShiftInvertMatrixFree,
        other => bail!("unknown solver '{other}' (expected dense, si-direct or si-matfree)"),
    })
}
