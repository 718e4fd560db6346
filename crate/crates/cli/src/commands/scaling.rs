//! Rate-versus-N series, power-law fits, period-4 analysis and kd dips.

use super::{kd_values, n_values, one_excitation, solve_dimer, write_json, Ctx, Setup};
use crate::config::RunConfig;
use crate::plot::{write_svg, Chart, Series, Style};
use crate::record::{write_records, SweepRecord};
use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use subradiance_core::analysis::{default_window, fit_power_law, period4_modulation, FitResult, Period4Report};
use subradiance_core::eig::SolverMode;
use subradiance_core::theory::DimerType;

/// Tracked state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Track {
    /// Most subradiant one-excitation state.
    One,
    /// Most subradiant type-I dimer.
    DimerI,
    /// Most subradiant type-II dimer.
    DimerII,
}

impl Track {
    /// Label.
    pub fn name(&self) -> &'static str {
        match self {
            Track::One => "one-excitation",
            Track::DimerI => "dimer-I",
            Track::DimerII => "dimer-II",
        }
    }
}

/// One measured rate.
#[derive(Debug, Clone, Serialize)]
pub struct RatePoint {
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d`.
    pub kd: f64,
    /// Family.
    pub track: Track,
    /// `Re λ`.
    pub re: f64,
    /// Decay rate.
    pub rate: f64,
    /// Eigenpair residual.
    pub residual: f64,
    /// Solve time.
    pub wall_time_s: f64,
}

/// Serialisable fit.
#[derive(Debug, Clone, Serialize)]
pub struct FitEntry {
    /// `k₁D·d / π`.
    pub kd_over_pi: f64,
    /// Family.
    pub track: Track,
    /// Exponent.
    pub exponent: f64,
    /// Prefactor.
    pub amplitude: f64,
    /// N range used.
    pub window: (f64, f64),
    /// R².
    pub r_squared: f64,
}

impl FitEntry {
    fn new(kd: f64, track: Track, f: &FitResult) -> Self {
        FitEntry { kd_over_pi: kd / PI, track, exponent: f.exponent(), amplitude: f.amplitude, window: f.window, r_squared: f.r_squared }
    }
}

/// Serialisable period-4 report.
#[derive(Debug, Clone, Serialize)]
pub struct Period4Entry {
    /// `k₁D·d / π`.
    pub kd_over_pi: f64,
    /// Family.
    pub track: Track,
    /// Autocorrelation at lags 2..8.
    pub autocorrelation: Vec<(usize, f64)>,
    /// Dominant lag.
    pub dominant_lag: usize,
    /// Period-4 Fourier amplitude of the detrended log-rate.
    pub depth: f64,
    /// Detection flag.
    pub detected: bool,
}

impl Period4Entry {
    fn new(kd: f64, track: Track, r: &Period4Report) -> Self {
        Period4Entry {
            kd_over_pi: kd / PI,
            track,
            autocorrelation: r.autocorrelation.clone(),
            dominant_lag: r.dominant_lag,
            depth: r.depth,
            detected: r.detected,
        }
    }
}

/// Command output.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingSummary {
    /// All rates.
    pub points: Vec<RatePoint>,
    /// Power-law fits.
    pub fits: Vec<FitEntry>,
    /// Period-4 reports (series with ≥ 16 consecutive N).
    pub period4: Vec<Period4Entry>,
    /// Per N: interior local minima of the type-II rate over kd (units π).
    pub dips: Vec<(usize, Vec<f64>)>,
    /// Failures.
    pub errors: Vec<String>,
}

/// Rate of one family on one chain.
pub fn measure(setup: &Setup, n: usize, kd: f64, track: Track) -> Result<RatePoint> {
    let chain = setup.chain(n, kd)?;
    let (re, rate, residual, wall) = match track {
        Track::One => {
            let (s, wall) = super::timed(|| one_excitation(&chain));
            let p = s?.pairs()[0].clone();
            (p.lambda.re, p.decay_rate(), p.residual, wall)
        }
        Track::DimerI | Track::DimerII => {
            let kind = if track == Track::DimerI { DimerType::TypeI } else { DimerType::TypeII };
            let (hit, wall) = solve_dimer(setup, &chain, kind)?;
            (hit.pair.lambda.re, hit.pair.decay_rate(), hit.pair.residual, wall)
        }
    };
    Ok(RatePoint { n, kd, track, re, rate, residual, wall_time_s: wall })
}

/// Power-law fit of one series with the configured window.
pub fn fit(points: &[RatePoint], fit_min_n: Option<usize>) -> Result<FitResult> {
    let series: Vec<(f64, f64)> = points.iter().map(|p| (p.n as f64, p.rate)).collect();
    let window = match fit_min_n {
        Some(lo) => Some((lo as f64, f64::INFINITY)),
        None => default_window(&series),
    };
    Ok(fit_power_law(&series, window)?)
}

/// Interior local minima over kd of one family at fixed N.
pub fn dips(points: &[RatePoint]) -> Vec<f64> {
    let mut p: Vec<&RatePoint> = points.iter().filter(|p| p.rate.is_finite()).collect();
    p.sort_by(|a, b| a.kd.total_cmp(&b.kd));
    p.windows(3).filter(|w| w[1].rate < w[0].rate && w[1].rate < w[2].rate).map(|w| w[1].kd / PI).collect()
}

fn consecutive(ns: &[usize]) -> bool {
    ns.windows(2).all(|w| w[1] == w[0] + 1)
}

/// `scaling` command.
pub fn run(cfg: &RunConfig, ctx: &Ctx) -> Result<ScalingSummary> {
    let setup = Setup::resolve("scaling", cfg, ctx, SolverMode::ShiftInvertDirect)?;
    let ns = n_values(cfg, &[50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150]);
    let kds = kd_values(cfg, &[0.1676, 0.25]);
    let tracks = [Track::One, Track::DimerI, Track::DimerII];
    let mut jobs: Vec<(usize, f64, Track)> = Vec::new();
    for &k in &kds {
        for &n in &ns {
            jobs.extend(tracks.iter().map(|&t| (n, k, t)));
        }
    }
    let outcomes: Vec<Result<RatePoint>> = jobs.par_iter().map(|&(n, k, t)| measure(&setup, n, k, t)).collect();
    let mut points = Vec::new();
    let mut errors = Vec::new();
    for (o, (n, k, t)) in outcomes.into_iter().zip(&jobs) {
        match o {
            Ok(p) => points.push(p),
            Err(e) => errors.push(format!("N={n} kd={:.4}π {}: {e}", k / PI, t.name())),
        }
    }
    let mut fits = Vec::new();
    let mut period4 = Vec::new();
    for &k in &kds {
        for &t in &tracks {
            let s: Vec<RatePoint> = points.iter().filter(|p| p.kd == k && p.track == t).cloned().collect();
            match fit(&s, cfg.fit_min_n) {
                Ok(f) => fits.push(FitEntry::new(k, t, &f)),
                Err(e) => errors.push(format!("fit kd={:.4}π {}: {e}", k / PI, t.name())),
            }
            let sn: Vec<usize> = s.iter().map(|p| p.n).collect();
            if s.len() >= 16 && consecutive(&sn) {
                let series: Vec<(usize, f64)> = s.iter().map(|p| (p.n, p.rate)).collect();
                if let Ok(r) = period4_modulation(&series) {
                    period4.push(Period4Entry::new(k, t, &r));
                }
            }
        }
    }
    let dips_by_n = if kds.len() >= 3 {
        ns.iter()
            .map(|&n| {
                let s: Vec<RatePoint> = points.iter().filter(|p| p.n == n && p.track == Track::DimerII).cloned().collect();
                (n, dips(&s))
            })
            .collect()
    } else {
        Vec::new()
    };
    let rows: Vec<SweepRecord> = points
        .iter()
        .map(|p| {
            let sector = if p.track == Track::One { "one" } else { "two" };
            SweepRecord::new(setup.experiment, p.n, p.kd, sector, p.track.name(), Some(p.re), -0.5 * p.rate)
                .solved(if p.track == Track::One { "dense" } else { setup.mode.name() }, Some(p.residual), Some(p.wall_time_s))
                .seeded(setup.seed, None)
        })
        .collect();
    write_records(&setup.path("scaling.csv"), &rows)?;
    let summary = ScalingSummary { points, fits, period4, dips: dips_by_n, errors };
    write_json(&setup.path("scaling-summary.json"), &summary)?;
    let mut series = Vec::new();
    for &k in &kds {
        for &t in &tracks {
            let pts: Vec<(f64, f64)> =
                summary.points.iter().filter(|p| p.kd == k && p.track == t).map(|p| (p.n as f64, p.rate)).collect();
            series.push(Series { name: format!("{} {:.4}π", t.name(), k / PI), points: pts, style: Style::Line });
        }
    }
    let chart = Chart {
        title: "most subradiant decay rates".into(),
        x_label: "N".into(),
        y_label: "decay rate / Γ".into(),
        log_x: true,
        log_y: true,
        series,
    };
    write_svg(&setup.out, "scaling", &chart.render())?;
    Ok(summary)
}
