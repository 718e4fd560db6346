//! The seven experiment commands.

pub mod defect;
pub mod disorder;
pub mod freespace;
pub mod mapcheck;
pub mod phase;
pub mod scaling;
pub mod spectrum;

use crate::config::{parse_solver, RunConfig};
use anyhow::{bail, Result};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;
use subradiance_core::analysis::{find_dimer, ClassThresholds, Classifier, DimerHit};
use subradiance_core::eig::{eig_dense_all, SolverConfig, SolverMode, Spectrum};
use subradiance_core::model::{build_single_hamiltonian, ChainGeometry};
use subradiance_core::theory::DimerType;
use subradiance_core::C64;

/// Settings shared by all commands (command-line flags).
#[derive(Debug, Clone)]
pub struct Ctx {
    /// Output directory.
    pub out: PathBuf,
    /// Seed from `--seed`.
    pub seed: Option<u64>,
    /// Solver from `--solver`.
    pub solver: Option<SolverMode>,
}

impl Ctx {
    /// Context writing to `out`.
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Ctx { out: out.into(), seed: None, solver: None }
    }

    /// Output directory, created on demand.
    pub fn out_dir(&self, cfg: &RunConfig) -> Result<PathBuf> {
        let dir = if self.out.as_os_str().is_empty() {
            cfg.output.clone().unwrap_or_else(|| PathBuf::from("out"))
        } else {
            self.out.clone()
        };
        std::fs::create_dir_all(&dir)?;
        Ok(dir)
    }
}

/// Resolved settings of one run.
#[derive(Debug, Clone)]
pub struct Setup {
    /// Experiment name.
    pub experiment: &'static str,
    /// Solver mode.
    pub mode: SolverMode,
    /// Residual tolerance.
    pub tol: f64,
    /// Seed.
    pub seed: u64,
    /// Γ₁D.
    pub gamma: f64,
    /// Classification thresholds.
    pub thresholds: ClassThresholds,
    /// Output directory.
    pub out: PathBuf,
}

impl Setup {
    /// Merges flags over the configuration; flags win.
    pub fn resolve(experiment: &'static str, cfg: &RunConfig, ctx: &Ctx, default_mode: SolverMode) -> Result<Self> {
        if let Some(e) = &cfg.experiment {
            if e != experiment {
                bail!("configuration is for '{e}', not '{experiment}'");
            }
        }
        let mode = match (ctx.solver, &cfg.solver) {
            (Some(m), _) => m,
            (None, Some(s)) => parse_solver(s)?,
            (None, None) => default_mode,
        };
        Ok(Setup {
            experiment,
            mode,
            tol: cfg.tol.unwrap_or(1e-10),
            seed: ctx.seed.or(cfg.seed).unwrap_or(0),
            gamma: cfg.gamma.unwrap_or(1.0),
            thresholds: cfg.thresholds(),
            out: ctx.out_dir(cfg)?,
        })
    }

    /// Targeted-solver settings.
    pub fn solver(&self, target: f64, count: usize) -> SolverConfig {
        SolverConfig::new(C64::new(target, 0.0), count).with_mode(self.mode).with_tol(self.tol).with_seed(self.seed)
    }

    /// Regular chain with `d = 1`.
    pub fn chain(&self, n: usize, kd: f64) -> Result<ChainGeometry> {
        Ok(ChainGeometry::new(n, 1.0, kd, self.gamma)?)
    }

    /// Path inside the output directory.
    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

/// `kd` values in radians from a config given in units of π.
pub fn kd_values(cfg: &RunConfig, default_over_pi: &[f64]) -> Vec<f64> {
    cfg.kd.as_ref().map(|k| k.values()).unwrap_or_else(|| default_over_pi.to_vec()).into_iter().map(|x| x * PI).collect()
}

/// Emitter counts.
pub fn n_values(cfg: &RunConfig, default: &[usize]) -> Vec<usize> {
    cfg.n.as_ref().map(|n| n.values()).unwrap_or_else(|| default.to_vec())
}

/// Runs `f` and returns its value with elapsed seconds.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

/// Full one-excitation spectrum.
pub fn one_excitation(chain: &ChainGeometry) -> Result<Spectrum> {
    let h = build_single_hamiltonian(chain, &chain.waveguide_kernel())?;
    Ok(eig_dense_all(&h, usize::MAX)?)
}

/// Most subradiant dimer of one family with timing.
pub fn solve_dimer(setup: &Setup, chain: &ChainGeometry, kind: DimerType) -> Result<(DimerHit, f64)> {
    let classifier = Classifier::with_thresholds(chain, setup.thresholds)?;
    let (hit, wall) = timed(|| find_dimer(chain, kind, &setup.solver(0.0, 10), &classifier));
    Ok((hit?, wall))
}

/// Writes pretty JSON.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

/// Complex vector as `[re, im]` pairs.
pub fn complex_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

/// File-name fragment for `kd`.
pub fn kd_tag(kd: f64) -> String {
    format!("{:.4}pi", kd / PI)
}
