//! Type-II dimer rates on an (N, kd) grid against one-excitation and fermionic baselines.

use super::{kd_values, n_values, one_excitation, solve_dimer, write_json, Ctx, Setup};
use crate::config::RunConfig;
use crate::plot::{write_svg, Heatmap};
use crate::record::{write_records, write_table, SweepRecord};
use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use subradiance_core::eig::SolverMode;
use subradiance_core::theory::DimerType;

/// One grid point.
#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d / π`.
    pub kd_over_pi: f64,
    /// Most subradiant type-II dimer rate (NaN if none was found).
    pub dimer2_rate: f64,
    /// `Re λ` of that dimer.
    pub dimer2_re: f64,
    /// Eigenpair residual.
    pub dimer2_residual: f64,
    /// Smallest one-excitation rate.
    pub one_rate: f64,
    /// Sum of the two smallest one-excitation rates.
    pub fermionic_rate: f64,
    /// Dimer outlives the most subradiant one-excitation state.
    pub crossover: bool,
    /// Dimer outlives the fermionic baseline.
    pub beats_fermionic: bool,
    /// Solve time.
    pub wall_time_s: f64,
    /// Failure message, if any.
    pub error: String,
}

/// Crossover summary.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseSummary {
    /// Grid.
    pub points: Vec<GridPoint>,
    /// Per kd: first N with a crossover.
    pub crossover_curve: Vec<(f64, Option<usize>)>,
    /// Per N: kd (units π) minimising the type-II rate.
    pub column_minimum: Vec<(usize, f64)>,
}

/// Evaluates one grid point.
pub fn point(setup: &Setup, n: usize, kd: f64) -> Result<GridPoint> {
    let chain = setup.chain(n, kd)?;
    let one = one_excitation(&chain)?;
    let rates: Vec<f64> = one.pairs().iter().map(|p| p.decay_rate()).collect();
    let one_rate = rates[0];
    let fermionic_rate = rates.iter().take(2).sum();
    let mut g = GridPoint {
        n,
        kd_over_pi: kd / PI,
        dimer2_rate: f64::NAN,
        dimer2_re: f64::NAN,
        dimer2_residual: f64::NAN,
        one_rate,
        fermionic_rate,
        crossover: false,
        beats_fermionic: false,
        wall_time_s: 0.0,
        error: String::new(),
    };
    match solve_dimer(setup, &chain, DimerType::TypeII) {
        Ok((hit, wall)) => {
            g.dimer2_rate = hit.pair.decay_rate();
            g.dimer2_re = hit.pair.lambda.re;
            g.dimer2_residual = hit.pair.residual;
            g.crossover = g.dimer2_rate < one_rate;
            g.beats_fermionic = g.dimer2_rate < fermionic_rate;
            g.wall_time_s = wall;
        }
        Err(e) => g.error = e.to_string(),
    }
    Ok(g)
}

/// Builds the crossover curve and column-minimum locus.
pub fn summarise(points: Vec<GridPoint>) -> PhaseSummary {
    let mut kds: Vec<f64> = points.iter().map(|p| p.kd_over_pi).collect();
    kds.sort_by(f64::total_cmp);
    kds.dedup();
    let mut ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    ns.sort();
    ns.dedup();
    let crossover_curve = kds
        .iter()
        .map(|&k| (k, points.iter().filter(|p| p.kd_over_pi == k && p.crossover).map(|p| p.n).min()))
        .collect();
    let column_minimum = ns
        .iter()
        .filter_map(|&n| {
            points
                .iter()
                .filter(|p| p.n == n && p.dimer2_rate.is_finite())
                .min_by(|a, b| a.dimer2_rate.total_cmp(&b.dimer2_rate))
                .map(|p| (n, p.kd_over_pi))
        })
        .collect();
    PhaseSummary { points, crossover_curve, column_minimum }
}

/// `phase-diagram` command.
pub fn run(cfg: &RunConfig, ctx: &Ctx) -> Result<PhaseSummary> {
    let setup = Setup::resolve("phase-diagram", cfg, ctx, SolverMode::ShiftInvertDirect)?;
    let ns = n_values(cfg, &[20, 30, 40, 50, 60]);
    let default_kd: Vec<f64> = (0..=40).map(|i| 0.15 + 0.001 * i as f64).collect();
    let kds = kd_values(cfg, &default_kd);
    let grid: Vec<(usize, f64)> = ns.iter().flat_map(|&n| kds.iter().map(move |&k| (n, k))).collect();
    let points = grid.par_iter().map(|&(n, kd)| point(&setup, n, kd)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for p in &points {
        let kd = p.kd_over_pi * PI;
        if p.dimer2_rate.is_finite() {
            rows.push(
                SweepRecord::new(setup.experiment, p.n, kd, "two", "dimer-II", Some(p.dimer2_re), -0.5 * p.dimer2_rate)
                    .solved(setup.mode.name(), Some(p.dimer2_residual), Some(p.wall_time_s))
                    .seeded(setup.seed, None)
                    .note(format!("crossover={}", p.crossover)),
            );
        } else {
            rows.push(SweepRecord::rate(setup.experiment, p.n, kd, "two", "dimer-II", f64::NAN).note(p.error.clone()));
        }
        rows.push(SweepRecord::rate(setup.experiment, p.n, kd, "one", "most-subradiant", p.one_rate).solved("dense", None, None));
        rows.push(
            SweepRecord::rate(setup.experiment, p.n, kd, "two", "fermionic-baseline", p.fermionic_rate).solved("dense", None, None),
        );
    }
    write_records(&setup.path("phase-diagram.csv"), &rows)?;
    write_table(&setup.path("phase-diagram-grid.csv"), &points)?;
    let summary = summarise(points);
    write_json(&setup.path("phase-diagram-summary.json"), &summary)?;
    let xs: Vec<f64> = kds.iter().map(|k| k / PI).collect();
    let ys: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let values = ns
        .iter()
        .map(|&n| {
            kds.iter()
                .map(|&k| {
                    summary
                        .points
                        .iter()
                        .find(|p| p.n == n && p.kd_over_pi == k / PI)
                        .map(|p| p.dimer2_rate)
                        .unwrap_or(f64::NAN)
                })
                .collect()
        })
        .collect();
    let map = Heatmap {
        title: "most subradiant type-II dimer rate (log scale)".into(),
        x_label: "kd / π".into(),
        y_label: "N".into(),
        xs,
        ys,
        values,
    };
    write_svg(&setup.out, "phase-diagram", &map.render())?;
    Ok(summary)
}
