//! Positional-disorder ensembles of type-II dimer rates.

use super::{kd_values, n_values, solve_dimer, write_json, Ctx, Setup};
use crate::config::RunConfig;
use crate::plot::{write_svg, Chart, Series, Style};
use crate::record::{write_records, SweepRecord};
use crate::rng::disorder_offsets;
use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use subradiance_core::eig::SolverMode;
use subradiance_core::theory::DimerType;

/// Default amplitudes (units of d).
pub const DEFAULT_AMPLITUDES: [f64; 3] = [0.005, 0.01, 0.02];

/// Rate of one chain realisation.
#[derive(Debug, Clone, Serialize)]
pub struct SamplePoint {
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d`.
    pub kd: f64,
    /// Amplitude (units of d); `None` for the clean chain.
    pub amplitude: Option<f64>,
    /// Sample index; `None` for the clean chain.
    pub sample: Option<usize>,
    /// `Re λ`.
    pub re: f64,
    /// Type-II dimer rate.
    pub rate: f64,
    /// Residual.
    pub residual: f64,
    /// Solve time.
    pub wall_time_s: f64,
}

/// Per-amplitude ensemble statistics at one N.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleReport {
    /// Emitter count.
    pub n: usize,
    /// Amplitude.
    pub amplitude: f64,
    /// kd (units π) of the dip probe.
    pub dip_kd_over_pi: f64,
    /// Per sample: dip rate below the rates at the outermost kd values.
    pub dip_persists: Vec<bool>,
    /// Per sample: dip rate below the clean rate.
    pub below_clean: Vec<bool>,
}

/// Command output.
#[derive(Debug, Clone, Serialize)]
pub struct DisorderSummary {
    /// Seed used.
    pub seed: u64,
    /// Clean references and samples.
    pub points: Vec<SamplePoint>,
    /// Ensemble statistics.
    pub ensembles: Vec<EnsembleReport>,
}

/// Type-II dimer rate of one realisation.
pub fn sample(setup: &Setup, n: usize, kd: f64, amplitude: f64, index: Option<usize>, seed: u64) -> Result<SamplePoint> {
    let mut chain = setup.chain(n, kd)?;
    if let Some(s) = index {
        let d = chain.d();
        chain = chain.with_offsets(disorder_offsets(seed, s as u64, n, amplitude, d))?;
    }
    let (hit, wall) = solve_dimer(setup, &chain, DimerType::TypeII)?;
    Ok(SamplePoint {
        n,
        kd,
        amplitude: index.map(|_| amplitude),
        sample: index,
        re: hit.pair.lambda.re,
        rate: hit.pair.decay_rate(),
        residual: hit.pair.residual,
        wall_time_s: wall,
    })
}

/// Dip and suppression checks for one amplitude.
pub fn ensemble(points: &[SamplePoint], n: usize, amplitude: f64, kds: &[f64], samples: usize) -> EnsembleReport {
    let dip = *kds.iter().min_by(|a, b| (*a - PI / 6.0).abs().total_cmp(&(*b - PI / 6.0).abs())).expect("kd list");
    let (lo, hi) = (kds[0], kds[kds.len() - 1]);
    let rate = |kd: f64, s: Option<usize>| {
        points
            .iter()
            .find(|p| p.n == n && p.kd == kd && p.sample == s && (s.is_none() || p.amplitude == Some(amplitude)))
            .map(|p| p.rate)
            .unwrap_or(f64::NAN)
    };
    let clean = rate(dip, None);
    let mut dip_persists = Vec::new();
    let mut below_clean = Vec::new();
    for s in 0..samples {
        let r = rate(dip, Some(s));
        dip_persists.push(r < rate(lo, Some(s)) && r < rate(hi, Some(s)));
        below_clean.push(r < clean);
    }
    EnsembleReport { n, amplitude, dip_kd_over_pi: dip / PI, dip_persists, below_clean }
}

/// `disorder` command.
pub fn run(cfg: &RunConfig, ctx: &Ctx) -> Result<DisorderSummary> {
    let setup = Setup::resolve("disorder", cfg, ctx, SolverMode::ShiftInvertDirect)?;
    let dis = cfg.disorder.clone().unwrap_or(crate::config::DisorderConfig { amplitudes: None, samples: None, seed: None });
    let Some(seed) = dis.seed.or(ctx.seed).or(cfg.seed) else {
        bail!("disorder sampling needs a seed (--seed, \"seed\" or \"disorder.seed\")");
    };
    let amplitudes = dis.amplitudes.clone().unwrap_or_else(|| DEFAULT_AMPLITUDES.to_vec());
    let samples = dis.samples.unwrap_or(10);
    let ns = n_values(cfg, &[60]);
    let kds = kd_values(cfg, &[0.15, 1.0 / 6.0, 0.19]);
    let mut jobs: Vec<(usize, f64, f64, Option<usize>)> = Vec::new();
    for &n in &ns {
        for &kd in &kds {
            jobs.push((n, kd, 0.0, None));
            for &a in &amplitudes {
                jobs.extend((0..samples).map(|s| (n, kd, a, Some(s))));
            }
        }
    }
    let points = jobs.par_iter().map(|&(n, kd, a, s)| sample(&setup, n, kd, a, s, seed)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<SweepRecord> = points
        .iter()
        .map(|p| {
            SweepRecord::new(setup.experiment, p.n, p.kd, "two", "dimer-II", Some(p.re), -0.5 * p.rate)
                .solved(setup.mode.name(), Some(p.residual), Some(p.wall_time_s))
                .seeded(seed, p.sample)
                .note(match p.amplitude {
                    Some(a) => format!("amplitude={a}"),
                    None => "clean".into(),
                })
        })
        .collect();
    write_records(&setup.path("disorder.csv"), &rows)?;
    let ensembles = ns
        .iter()
        .flat_map(|&n| amplitudes.iter().map(move |&a| (n, a)))
        .map(|(n, a)| ensemble(&points, n, a, &kds, samples))
        .collect();
    let summary = DisorderSummary { seed, points, ensembles };
    write_json(&setup.path("disorder-summary.json"), &summary)?;
    let mut series = Vec::new();
    for &n in &ns {
        let clean: Vec<(f64, f64)> =
            summary.points.iter().filter(|p| p.n == n && p.sample.is_none()).map(|p| (p.kd / PI, p.rate)).collect();
        series.push(Series { name: format!("clean N={n}"), points: clean, style: Style::Line });
        for &a in &amplitudes {
            let pts: Vec<(f64, f64)> = summary
                .points
                .iter()
                .filter(|p| p.n == n && p.amplitude == Some(a))
                .map(|p| (p.kd / PI, p.rate))
                .collect();
            series.push(Series { name: format!("δ={a}"), points: pts, style: Style::Scatter });
        }
    }
    let chart = Chart {
        title: "type-II dimer rate under positional disorder".into(),
        x_label: "kd / π".into(),
        y_label: "decay rate / Γ".into(),
        log_x: false,
        log_y: true,
        series,
    };
    write_svg(&setup.out, "disorder", &chart.render())?;
    Ok(summary)
}
