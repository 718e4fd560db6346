//! Exact-identity checks between the relative-coordinate and defect models.

use super::{kd_values, n_values, solve_dimer, write_json, Ctx, Setup};
use crate::config::RunConfig;
use crate::record::{write_records, write_table, SweepRecord};
use anyhow::Result;
use serde::Serialize;
use std::f64::consts::PI;
use subradiance_core::analysis::k_delta_decompose;
use subradiance_core::eig::{eig_dense_all, SolverMode};
use subradiance_core::model::{build_relative_hamiltonian, RelativeModelSpec};
use subradiance_core::theory::{even_extension_residual, halving_check, parity_reduce, DimerType};

/// Truncations checked.
pub const M_GRID: [usize; 5] = [1, 2, 5, 10, 30];
/// kd values (units π) checked.
pub const KD_GRID: [f64; 5] = [0.1, 0.2, 0.25, 0.3, 0.45];

/// One identity check.
#[derive(Debug, Clone, Serialize)]
pub struct MapRow {
    /// Truncation M.
    pub m: usize,
    /// `K·d / π`.
    pub big_k_over_pi: f64,
    /// `k₁D·d / π`.
    pub kd_over_pi: f64,
    /// Matched eigenvalue mismatch of `spec(ℋ^K) = 2·spec(even block)`.
    pub halving: f64,
    /// Entrywise `|2E − ℋ^K|`.
    pub block: f64,
    /// Worst `‖ℋ^K_def·fold(ψ) − (λ/2)fold(ψ)‖`.
    pub extension: f64,
    /// Entrywise gauge deviation (K = π only, NaN otherwise).
    pub gauge: f64,
}

/// Full-chain dimer compared with the relative-coordinate ground profile.
#[derive(Debug, Clone, Serialize)]
pub struct CrossModel {
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d / π`.
    pub kd_over_pi: f64,
    /// Full-chain dimer eigenvalue.
    pub full: (f64, f64),
    /// Relative-model eigenvalue nearest `ω_I`.
    pub relative: (f64, f64),
    /// `Σ_Δ √(p_full(Δ) p_rel(Δ))` of the normalised separation profiles.
    pub overlap: f64,
}

/// Command output.
#[derive(Debug, Clone, Serialize)]
pub struct MapSummary {
    /// Identity table.
    pub rows: Vec<MapRow>,
    /// Largest halving/extension/block residual.
    pub max_residual: f64,
    /// Largest gauge deviation.
    pub max_gauge: f64,
    /// Cross-model comparison.
    pub cross_model: Option<CrossModel>,
}

/// Runs the identity grid.
pub fn identity_grid(gamma: f64) -> Result<Vec<MapRow>> {
    let mut rows = Vec::new();
    for &m in &M_GRID {
        for big_k in [0.0, PI] {
            for &k in &KD_GRID {
                let kd = k * PI;
                let spec = RelativeModelSpec::new(big_k, m, kd, gamma)?;
                let h = halving_check(&spec)?;
                let gauge = if big_k > 0.0 { parity_reduce(kd)?.max_deviation(m, gamma)? } else { f64::NAN };
                rows.push(MapRow {
                    m,
                    big_k_over_pi: big_k / PI,
                    kd_over_pi: k,
                    halving: h.eigenvalue_mismatch,
                    block: h.matrix_mismatch,
                    extension: even_extension_residual(&spec)?,
                    gauge,
                });
            }
        }
    }
    Ok(rows)
}

/// Full-chain type-I dimer against the `K = 0` relative model with `M = N − 1`.
pub fn cross_model(setup: &Setup, n: usize, kd: f64) -> Result<CrossModel> {
    let chain = setup.chain(n, kd)?;
    let (hit, _) = solve_dimer(setup, &chain, DimerType::TypeI)?;
    let dec = k_delta_decompose(&hit.pair.vector, &chain)?;
    let spec = RelativeModelSpec::new(0.0, n - 1, kd, setup.gamma)?;
    let rel = eig_dense_all(&build_relative_hamiltonian(&spec), usize::MAX)?;
    let omega = 2.0 * setup.gamma * kd.cos() / kd.sin();
    let best = rel
        .pairs()
        .iter()
        .min_by(|a, b| (a.lambda.re - omega).abs().total_cmp(&(b.lambda.re - omega).abs()))
        .expect("non-empty");
    let pf: f64 = dec.delta_marginal.iter().sum();
    let overlap = dec.delta_marginal.iter().zip(&best.vector).map(|(a, v)| (a / pf * v.norm_sqr()).sqrt()).sum();
    Ok(CrossModel {
        n,
        kd_over_pi: kd / PI,
        full: (hit.pair.lambda.re, hit.pair.lambda.im),
        relative: (best.lambda.re, best.lambda.im),
        overlap,
    })
}

/// `map-check` command.
pub fn run(cfg: &RunConfig, ctx: &Ctx) -> Result<MapSummary> {
    let setup = Setup::resolve("map-check", cfg, ctx, SolverMode::ShiftInvertDirect)?;
    let rows = identity_grid(setup.gamma)?;
    let max_residual = rows.iter().map(|r| r.halving.max(r.block).max(r.extension)).fold(0.0, f64::max);
    let max_gauge = rows.iter().filter(|r| r.gauge.is_finite()).map(|r| r.gauge).fold(0.0, f64::max);
    write_table(&setup.path("map-check.csv"), &rows)?;
    let n = n_values(cfg, &[100])[0];
    let kd = kd_values(cfg, &[0.25])[0];
    let cross = cross_model(&setup, n, kd)?;
    let records = vec![
        SweepRecord::new(setup.experiment, n, kd, "two", "dimer-I", Some(cross.full.0), cross.full.1)
            .solved(setup.mode.name(), None, None)
            .seeded(setup.seed, None),
        SweepRecord::new(setup.experiment, n, kd, "relative", "ground", Some(cross.relative.0), cross.relative.1)
            .solved("dense", None, None)
            .note(format!("profile overlap={:.6}", cross.overlap)),
    ];
    write_records(&setup.path("map-check-cross.csv"), &records)?;
    let summary = MapSummary { rows, max_residual, max_gauge, cross_model: Some(cross) };
    write_json(&setup.path("map-check-summary.json"), &summary)?;
    Ok(summary)
}
