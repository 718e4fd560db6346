//! Localised states around a missing site against the secular-equation prediction.

use super::{complex_pairs, kd_tag, kd_values, n_values, timed, write_json, Ctx, Setup};
use crate::config::{DefectSites, RunConfig};
use crate::plot::{write_svg, Chart, Series, Style};
use crate::record::{write_records, SweepRecord};
use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use subradiance_core::analysis::{fit_exponential_tail, localized_state};
use subradiance_core::eig::{eig_dense_all, EigenPair, SolverMode};
use subradiance_core::model::{build_missing_site_hamiltonian, ChainGeometry};
use subradiance_core::theory::{boundary_root, omega_q, solve_defect_secular};
use subradiance_core::C64;

/// Sites within this distance of the defect count as "near".
pub const LOCAL_RADIUS: usize = 6;

/// One defect configuration.
#[derive(Debug, Clone, Serialize)]
pub struct DefectPoint {
    /// Emitter count including the empty site.
    pub n: usize,
    /// One-based empty site.
    pub m: usize,
    /// `k₁D·d`.
    pub kd: f64,
    /// `min(m − 1, N − m)`.
    pub min_nlr: usize,
    /// Localised eigenvalue.
    pub re: f64,
    /// Localised decay rate.
    pub rate: f64,
    /// Residual.
    pub residual: f64,
    /// Secular-equation eigenvalue.
    pub secular_re: f64,
    /// Secular-equation decay rate.
    pub secular_rate: f64,
    /// Rate from `ω_q(q_I + δ)`.
    pub delta_rate: f64,
    /// Solve time.
    pub wall_time_s: f64,
    /// Unit eigenvector on the occupied sites (zero-based labels).
    #[serde(skip)]
    pub vector: Vec<C64>,
    /// Zero-based labels of the occupied sites.
    #[serde(skip)]
    pub sites: Vec<usize>,
}

/// Localised eigenpair of the chain with site `m` (one-based) left empty.
pub fn localized(chain: &ChainGeometry, m: usize, gamma: f64) -> Result<(EigenPair, Vec<usize>)> {
    let n = chain.n();
    if m < 2 || m > n - 1 {
        bail!("defect site {m} must satisfy 2 <= m <= N-1 = {}", n - 1);
    }
    let h = build_missing_site_hamiltonian(chain, &chain.waveguide_kernel(), m - 1)?;
    let spectrum = eig_dense_all(&h, usize::MAX)?;
    let centre = gamma * chain.kd().cos() / chain.kd().sin();
    let cands: Vec<EigenPair> =
        spectrum.into_pairs().into_iter().filter(|p| (p.lambda.re - centre).abs() < 0.5 * gamma).collect();
    let sites: Vec<usize> = (0..n).filter(|&i| i != m - 1).collect();
    let radius = LOCAL_RADIUS.min(((m - 1).min(n - m) / 2).max(1));
    let i = localized_state(&cands, &sites, m - 1, radius).ok_or_else(|| anyhow::anyhow!("no candidate state near Γcot(kd)"))?;
    Ok((cands[i].clone(), sites))
}

/// Numerics and theory for one configuration.
pub fn point(setup: &Setup, n: usize, m: usize, kd: f64) -> Result<DefectPoint> {
    let chain = setup.chain(n, kd)?;
    let (res, wall) = timed(|| localized(&chain, m, setup.gamma));
    let (pair, sites) = res?;
    let sol = solve_defect_secular(n, kd, m)?;
    let delta_rate = -2.0 * omega_q(kd, boundary_root(kd) + sol.delta).im * setup.gamma;
    Ok(DefectPoint {
        n,
        m,
        kd,
        min_nlr: sol.min_nlr,
        re: pair.lambda.re,
        rate: pair.decay_rate(),
        residual: pair.residual,
        secular_re: sol.omega_q.re * setup.gamma,
        secular_rate: sol.decay_rate() * setup.gamma,
        delta_rate,
        wall_time_s: wall,
        vector: pair.vector,
        sites,
    })
}

/// Log-slope comparison for central defects at one kd.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeReport {
    /// `k₁D·d / π`.
    pub kd_over_pi: f64,
    /// Slope of `ln rate` per unit `minN_LR` from numerics.
    pub numeric: f64,
    /// Same slope from `ω_q(q_I + δ)`.
    pub predicted: f64,
    /// `2 ln cos kd`.
    pub asymptotic: f64,
    /// `|numeric/predicted − 1|`.
    pub relative_error: f64,
}

/// Mirror and centre checks of a full scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d / π`.
    pub kd_over_pi: f64,
    /// `max |rate(m) − rate(N+1−m)|`.
    pub max_asymmetry: f64,
    /// Sites of the smallest rate.
    pub argmin: Vec<usize>,
    /// Whether the minimum sits at the centre.
    pub minimum_at_centre: bool,
}

/// Command output.
#[derive(Debug, Clone, Serialize)]
pub struct DefectSummary {
    /// All configurations.
    pub points: Vec<DefectPoint>,
    /// Central-defect slopes.
    pub slopes: Vec<SlopeReport>,
    /// Scans.
    pub scans: Vec<ScanReport>,
}

/// Central site `(N+1)/2` (one-based, left of centre for even N).
pub fn centre(n: usize) -> usize {
    (n + 1) / 2
}

/// Slope of central-defect rates against `minN_LR`.
pub fn slope(points: &[&DefectPoint]) -> Result<SlopeReport> {
    let num: Vec<(f64, f64)> = points.iter().map(|p| (p.min_nlr as f64, p.rate)).collect();
    let pred: Vec<(f64, f64)> = points.iter().map(|p| (p.min_nlr as f64, p.delta_rate)).collect();
    let numeric = fit_exponential_tail(&num)?.slope;
    let predicted = fit_exponential_tail(&pred)?.slope;
    let kd = points[0].kd;
    Ok(SlopeReport {
        kd_over_pi: kd / PI,
        numeric,
        predicted,
        asymptotic: 2.0 * kd.cos().ln(),
        relative_error: (numeric / predicted - 1.0).abs(),
    })
}

/// Mirror asymmetry and minimum location of a scan over `m = 2..N−1`.
pub fn scan_report(points: &[&DefectPoint]) -> ScanReport {
    let n = points[0].n;
    let rate = |m: usize| points.iter().find(|p| p.m == m).map(|p| p.rate);
    let mut max_asymmetry: f64 = 0.0;
    for p in points {
        if let Some(r) = rate(n + 1 - p.m) {
            max_asymmetry = max_asymmetry.max((p.rate - r).abs());
        }
    }
    let min = points.iter().map(|p| p.rate).fold(f64::INFINITY, f64::min);
    let argmin: Vec<usize> = points.iter().filter(|p| p.rate <= min * (1.0 + 1e-9)).map(|p| p.m).collect();
    let minimum_at_centre = argmin.iter().all(|&m| m == centre(n) || m == n + 1 - centre(n));
    ScanReport { n, kd_over_pi: points[0].kd / PI, max_asymmetry, argmin, minimum_at_centre }
}

#[derive(Serialize)]
struct Profile {
    n: usize,
    m: usize,
    kd_over_pi: f64,
    lambda: [f64; 2],
    sites: Vec<usize>,
    amplitude: Vec<[f64; 2]>,
    modulus: Vec<f64>,
    phase: Vec<f64>,
}

/// `defect` command.
pub fn run(cfg: &RunConfig, ctx: &Ctx) -> Result<DefectSummary> {
    let setup = Setup::resolve("defect", cfg, ctx, SolverMode::DenseAll)?;
    let ns = n_values(cfg, &[21, 25, 29, 33, 37, 41, 45, 49]);
    let kds = kd_values(cfg, &[0.25]);
    let sites = cfg.defect_sites.clone().unwrap_or(DefectSites::Named("center".into()));
    let mut jobs = Vec::new();
    for &n in &ns {
        for &kd in &kds {
            let ms: Vec<usize> = match &sites {
                DefectSites::Named(s) if s == "scan" => (2..n).collect(),
                DefectSites::Named(_) => vec![centre(n)],
                DefectSites::List(v) => v.clone(),
            };
            jobs.extend(ms.into_iter().map(|m| (n, m, kd)));
        }
    }
    let points = jobs.par_iter().map(|&(n, m, kd)| point(&setup, n, m, kd)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for p in &points {
        let note = format!("m={}, minNLR={}", p.m, p.min_nlr);
        rows.push(
            SweepRecord::new(setup.experiment, p.n, p.kd, "defect", "localized", Some(p.re), -0.5 * p.rate)
                .solved("dense", Some(p.residual), Some(p.wall_time_s))
                .seeded(setup.seed, None)
                .note(note.clone()),
        );
        rows.push(
            SweepRecord::new(setup.experiment, p.n, p.kd, "defect", "secular", Some(p.secular_re), -0.5 * p.secular_rate)
                .seeded(setup.seed, None)
                .note(note),
        );
    }
    write_records(&setup.path("defect.csv"), &rows)?;
    let mut slopes = Vec::new();
    let mut scans = Vec::new();
    for &kd in &kds {
        let central: Vec<&DefectPoint> = points.iter().filter(|p| p.kd == kd && p.m == centre(p.n)).collect();
        if central.len() >= 4 {
            slopes.push(slope(&central)?);
        }
        for &n in &ns {
            let scan: Vec<&DefectPoint> = points.iter().filter(|p| p.kd == kd && p.n == n).collect();
            if scan.len() >= 3 {
                scans.push(scan_report(&scan));
            }
        }
    }
    for p in points.iter().filter(|p| p.m == centre(p.n) || cfg.dump_vectors.unwrap_or(false)) {
        let prof = Profile {
            n: p.n,
            m: p.m,
            kd_over_pi: p.kd / PI,
            lambda: [p.re, -0.5 * p.rate],
            sites: p.sites.iter().map(|s| s + 1).collect(),
            amplitude: complex_pairs(&p.vector),
            modulus: p.vector.iter().map(|c| c.norm()).collect(),
            phase: p.vector.iter().map(|c| c.arg()).collect(),
        };
        write_json(&setup.path(&format!("defect-profile-N{}-m{}-kd{}.json", p.n, p.m, kd_tag(p.kd))), &prof)?;
    }
    let summary = DefectSummary { points, slopes, scans };
    write_json(&setup.path("defect-summary.json"), &summary)?;
    let mut series = Vec::new();
    for &kd in &kds {
        let c: Vec<&DefectPoint> = summary.points.iter().filter(|p| p.kd == kd && p.m == centre(p.n)).collect();
        series.push(Series { name: format!("numeric {}", kd_tag(kd)), points: c.iter().map(|p| (p.n as f64, p.rate)).collect(), style: Style::Scatter });
        series.push(Series { name: format!("secular {}", kd_tag(kd)), points: c.iter().map(|p| (p.n as f64, p.secular_rate)).collect(), style: Style::Line });
    }
    let chart = Chart {
        title: "central-defect localised state".into(),
        x_label: "N".into(),
        y_label: "decay rate / Γ".into(),
        log_x: false,
        log_y: true,
        series,
    };
    write_svg(&setup.out, "defect", &chart.render())?;
    Ok(summary)
}
