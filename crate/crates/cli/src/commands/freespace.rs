//! Localised states around a missing site in free-space dipole chains.

use super::defect::{centre, LOCAL_RADIUS};
use super::{complex_pairs, n_values, timed, write_json, Ctx, Setup};
use crate::config::{KernelKind, RunConfig};
use crate::plot::{write_svg, Chart, Series, Style};
use crate::record::{write_records, SweepRecord};
use anyhow::{anyhow, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use subradiance_core::analysis::localized_state;
use subradiance_core::eig::{eig_dense_all, SolverMode};
use subradiance_core::model::{build_missing_site_hamiltonian, ChainGeometry, CouplingKernel};
use subradiance_core::C64;

/// Polarisation label.
pub fn kernel_name(k: KernelKind) -> &'static str {
    match k {
        KernelKind::Waveguide => "waveguide",
        KernelKind::Transverse => "transverse",
        KernelKind::Parallel => "parallel",
    }
}

fn kernel(kind: KernelKind, gamma: f64) -> CouplingKernel {
    match kind {
        KernelKind::Transverse => CouplingKernel::FreeSpace3DTransverse { lambda0: 1.0, gamma0: gamma },
        KernelKind::Parallel => CouplingKernel::FreeSpace3DParallel { lambda0: 1.0, gamma0: gamma },
        KernelKind::Waveguide => CouplingKernel::Waveguide1D { k1d: 2.0 * PI, gamma1d: gamma },
    }
}

/// Localised state of one chain.
#[derive(Debug, Clone, Serialize)]
pub struct FreePoint {
    /// Emitter count including the empty site.
    pub n: usize,
    /// One-based empty site.
    pub m: usize,
    /// Lattice constant in units of λ₀.
    pub separation: f64,
    /// Kernel.
    pub kernel: &'static str,
    /// `Re λ`.
    pub re: f64,
    /// Decay rate in units of γ₀.
    pub rate: f64,
    /// Residual.
    pub residual: f64,
    /// Weight within the local radius.
    pub local_weight: f64,
    /// Solve time.
    pub wall_time_s: f64,
    /// Eigenvector on occupied sites.
    #[serde(skip)]
    pub vector: Vec<C64>,
    /// Zero-based labels of occupied sites.
    #[serde(skip)]
    pub sites: Vec<usize>,
}

/// Convergence in N for one (separation, kernel).
#[derive(Debug, Clone, Serialize)]
pub struct Convergence {
    /// Lattice constant in units of λ₀.
    pub separation: f64,
    /// Kernel.
    pub kernel: &'static str,
    /// `(N_a, N_b, |r_b − r_a|/r_b)` for consecutive N.
    pub rate_changes: Vec<(usize, usize, f64)>,
    /// `(N_a, N_b, max |ψ_a| − |ψ_b| near the defect / peak)` for consecutive N.
    pub profile_changes: Vec<(usize, usize, f64)>,
}

/// Solves one chain.
pub fn point(n: usize, separation: f64, kind: KernelKind, gamma: f64) -> Result<FreePoint> {
    let chain = ChainGeometry::new(n, separation, 2.0 * PI, gamma)?;
    let m = centre(n);
    let (solved, wall) = timed(|| -> Result<_> {
        let h = build_missing_site_hamiltonian(&chain, &kernel(kind, gamma), m - 1)?;
        let pairs = eig_dense_all(&h, usize::MAX)?.into_pairs();
        Ok((pairs, (0..n).filter(|&i| i != m - 1).collect::<Vec<usize>>()))
    });
    let (pairs, sites) = solved?;
    let i = localized_state(&pairs, &sites, m - 1, LOCAL_RADIUS).ok_or_else(|| anyhow!("empty spectrum"))?;
    let p = &pairs[i];
    let local_weight =
        p.vector.iter().zip(&sites).filter(|(_, &s)| s.abs_diff(m - 1) <= LOCAL_RADIUS).map(|(v, _)| v.norm_sqr()).sum();
    Ok(FreePoint {
        n,
        m,
        separation,
        kernel: kernel_name(kind),
        re: p.lambda.re,
        rate: p.decay_rate(),
        residual: p.residual,
        local_weight,
        wall_time_s: wall,
        vector: p.vector.clone(),
        sites,
    })
}

/// `|ψ|` on offsets `−radius..=radius` from the defect (offset 0 is the empty site).
pub fn local_modulus(p: &FreePoint, radius: usize) -> Vec<f64> {
    let d = p.m - 1;
    (0..=2 * radius)
        .map(|j| {
            let site = (d + j).checked_sub(radius);
            site.and_then(|s| p.sites.iter().position(|&x| x == s)).map(|i| p.vector[i].norm()).unwrap_or(0.0)
        })
        .collect()
}

/// Largest pointwise difference of local moduli relative to the peak.
pub fn profile_change(a: &FreePoint, b: &FreePoint) -> f64 {
    let (ma, mb) = (local_modulus(a, LOCAL_RADIUS), local_modulus(b, LOCAL_RADIUS));
    let peak = ma.iter().chain(&mb).cloned().fold(0.0, f64::max);
    ma.iter().zip(&mb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / peak
}

#[derive(Serialize)]
struct Profile {
    n: usize,
    m: usize,
    separation: f64,
    kernel: &'static str,
    lambda: [f64; 2],
    sites: Vec<usize>,
    amplitude: Vec<[f64; 2]>,
    modulus: Vec<f64>,
    phase: Vec<f64>,
}

/// Command output.
#[derive(Debug, Clone, Serialize)]
pub struct FreeSummary {
    /// All chains.
    pub points: Vec<FreePoint>,
    /// Convergence tables.
    pub convergence: Vec<Convergence>,
}

/// `freespace` command.
pub fn run(cfg: &RunConfig, ctx: &Ctx) -> Result<FreeSummary> {
    let setup = Setup::resolve("freespace", cfg, ctx, SolverMode::DenseAll)?;
    let ns = n_values(cfg, &[100, 120, 160, 200]);
    let seps = cfg.separation.clone().unwrap_or_else(|| vec![0.35, 0.45]);
    let kernels = cfg.kernel.clone().unwrap_or_else(|| vec![KernelKind::Transverse, KernelKind::Parallel]);
    let mut jobs: Vec<(usize, f64, KernelKind)> = Vec::new();
    for &s in &seps {
        for &k in &kernels {
            jobs.extend(ns.iter().map(|&n| (n, s, k)));
        }
    }
    let points = jobs.par_iter().map(|&(n, s, k)| point(n, s, k, setup.gamma)).collect::<Result<Vec<_>>>()?;
    let mut convergence = Vec::new();
    for &s in &seps {
        for &k in &kernels {
            let mut group: Vec<&FreePoint> = points.iter().filter(|p| p.separation == s && p.kernel == kernel_name(k)).collect();
            group.sort_by_key(|p| p.n);
            let rate_changes = group.windows(2).map(|w| (w[0].n, w[1].n, (w[1].rate - w[0].rate).abs() / w[1].rate)).collect();
            let profile_changes = group.windows(2).map(|w| (w[0].n, w[1].n, profile_change(w[0], w[1]))).collect();
            convergence.push(Convergence { separation: s, kernel: kernel_name(k), rate_changes, profile_changes });
        }
    }
    let rows: Vec<SweepRecord> = points
        .iter()
        .map(|p| {
            SweepRecord::new(setup.experiment, p.n, 2.0 * PI * p.separation, "defect", "localized", Some(p.re), -0.5 * p.rate)
                .solved("dense", Some(p.residual), Some(p.wall_time_s))
                .seeded(setup.seed, None)
                .note(format!("kernel={}, d/lambda0={}, m={}", p.kernel, p.separation, p.m))
        })
        .collect();
    write_records(&setup.path("freespace.csv"), &rows)?;
    for p in &points {
        let prof = Profile {
            n: p.n,
            m: p.m,
            separation: p.separation,
            kernel: p.kernel,
            lambda: [p.re, -0.5 * p.rate],
            sites: p.sites.iter().map(|s| s + 1).collect(),
            amplitude: complex_pairs(&p.vector),
            modulus: p.vector.iter().map(|c| c.norm()).collect(),
            phase: p.vector.iter().map(|c| c.arg()).collect(),
        };
        write_json(&setup.path(&format!("freespace-profile-{}-d{}-N{}.json", p.kernel, p.separation, p.n)), &prof)?;
    }
    let summary = FreeSummary { points, convergence };
    write_json(&setup.path("freespace-summary.json"), &summary)?;
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let series = summary
        .points
        .iter()
        .filter(|p| p.n == n_max)
        .map(|p| Series {
            name: format!("{} d={}λ₀", p.kernel, p.separation),
            points: p.sites.iter().zip(&p.vector).map(|(&s, v)| (s as f64 + 1.0, v.norm())).collect(),
            style: Style::Line,
        })
        .collect();
    let chart = Chart {
        title: format!("localised-state amplitude, N={n_max}"),
        x_label: "site".into(),
        y_label: "|ψ|".into(),
        log_x: false,
        log_y: true,
        series,
    };
    write_svg(&setup.out, "freespace", &chart.render())?;
    Ok(summary)
}
