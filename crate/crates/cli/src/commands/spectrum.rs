//! Full two-excitation spectra with classification of the subradiant part.

use super::{complex_pairs, kd_tag, kd_values, n_values, timed, write_json, Ctx, Setup};
use crate::config::RunConfig;
use crate::plot::{write_svg, Chart, Series, Style};
use crate::record::{write_records, SweepRecord};
use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;
use subradiance_core::analysis::{cluster_branches, Classifier, StateLabel};
use subradiance_core::eig::{eig_dense_select, eig_target_two_excitation, EigenPair, SolverMode};
use subradiance_core::model::{build_two_hamiltonian, TwoExcitationBasis};
use subradiance_core::theory::DimerType;

/// Largest two-excitation dimension handled by the dense path.
pub const DENSE_CAP: usize = 2415;
/// States below this rate (units Γ) get eigenvectors and labels.
pub const CLASSIFY_BELOW: f64 = 0.1;

/// Branch of subradiant states.
#[derive(Debug, Clone, Serialize)]
pub struct Branch {
    /// Members.
    pub size: usize,
    /// Smallest and largest `Re λ`.
    pub re_range: (f64, f64),
    /// Smallest decay rate.
    pub min_rate: f64,
    /// Most common label.
    pub label: String,
}

/// Result for one `(N, kd)`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d`.
    pub kd: f64,
    /// Eigenvalues found.
    pub eigenvalues: usize,
    /// `Σλ` (equals `−iΓ·N(N−1)/2` for a full spectrum).
    pub trace: (f64, f64),
    /// Subradiant branches (`rate < 0.05Γ`, split at gaps `> 0.2Γ`).
    pub branches: Vec<Branch>,
    /// Solve time.
    pub wall_time_s: f64,
    #[serde(skip)]
    rows: Vec<SweepRecord>,
    #[serde(skip)]
    classified: Vec<(EigenPair, StateLabel)>,
}

/// Computes the spectrum of one chain.
pub fn compute(setup: &Setup, n: usize, kd: f64, count: usize) -> Result<SpectrumResult> {
    let chain = setup.chain(n, kd)?;
    let basis = TwoExcitationBasis::new(n);
    let dim = basis.dim();
    let classifier = Classifier::with_thresholds(&chain, setup.thresholds)?;
    let cut = CLASSIFY_BELOW * setup.gamma;
    let (solved, wall) = timed(|| -> Result<_> {
        if setup.mode == SolverMode::DenseAll {
            if dim > DENSE_CAP {
                bail!("dense spectrum of N = {n} (dimension {dim}) exceeds the cap {DENSE_CAP}; choose si-direct or si-matfree");
            }
            let h = build_two_hamiltonian(&chain, &chain.waveguide_kernel(), &basis)?;
            let mut all = Vec::new();
            let vectors = eig_dense_select(&h, DENSE_CAP, |_, lam| {
                all.push(lam);
                -2.0 * lam.im < cut
            })?;
            Ok((all, vectors))
        } else {
            let mut found: Vec<EigenPair> = Vec::new();
            for kind in [DimerType::TypeI, DimerType::TypeII] {
                let target = classifier.omega(kind);
                if !target.is_finite() {
                    continue;
                }
                let mut cfg = setup.solver(target, count.min(dim - 1));
                cfg.max_subspace = cfg.max_subspace.min(dim);
                for p in eig_target_two_excitation(&chain, &cfg)?.into_pairs() {
                    if found.iter().all(|q| (q.lambda - p.lambda).norm() > 1e-8) {
                        found.push(p);
                    }
                }
            }
            let all = found.iter().map(|p| p.lambda).collect();
            let vectors = found.into_iter().filter(|p| p.decay_rate() < cut).collect();
            Ok((all, vectors))
        }
    });
    let (all, vectors): (Vec<subradiance_core::C64>, Vec<EigenPair>) = solved?;
    let solver = setup.mode.name();
    let mut classified = Vec::new();
    let mut rows = Vec::new();
    for p in &vectors {
        let c = classifier.classify(p)?;
        rows.push(
            SweepRecord::new(setup.experiment, n, kd, "two", c.label.name(), Some(p.lambda.re), p.lambda.im)
                .solved(solver, Some(p.residual), None)
                .seeded(setup.seed, None)
                .note(format!("delta={} k={:.4}", c.dominant_delta, c.dominant_k)),
        );
        classified.push((p.clone(), c.label));
    }
    for lam in all.iter().filter(|l| -2.0 * l.im >= cut) {
        rows.push(
            SweepRecord::new(setup.experiment, n, kd, "two", "unclassified", Some(lam.re), lam.im)
                .solved(solver, None, None)
                .seeded(setup.seed, None),
        );
    }
    let pairs: Vec<EigenPair> = classified.iter().map(|c| c.0.clone()).collect();
    let branches = cluster_branches(&pairs, 0.05 * setup.gamma, 0.2 * setup.gamma)
        .into_iter()
        .map(|idx| {
            let re: Vec<f64> = idx.iter().map(|&i| pairs[i].lambda.re).collect();
            let mut counts: Vec<(StateLabel, usize)> = Vec::new();
            for &i in &idx {
                match counts.iter_mut().find(|c| c.0 == classified[i].1) {
                    Some(c) => c.1 += 1,
                    None => counts.push((classified[i].1, 1)),
                }
            }
            let label = counts.iter().max_by_key(|c| c.1).map(|c| c.0.name()).unwrap_or("other").to_string();
            Branch {
                size: idx.len(),
                re_range: (re.iter().cloned().fold(f64::INFINITY, f64::min), re.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
                min_rate: idx.iter().map(|&i| pairs[i].decay_rate()).fold(f64::INFINITY, f64::min),
                label,
            }
        })
        .collect();
    let tr = all.iter().fold(subradiance_core::C64::new(0.0, 0.0), |a, b| a + b);
    Ok(SpectrumResult { n, kd, eigenvalues: all.len(), trace: (tr.re, tr.im), branches, wall_time_s: wall, rows, classified })
}

#[derive(Serialize)]
struct DumpEntry {
    lambda: [f64; 2],
    label: &'static str,
    vector: Vec<[f64; 2]>,
}

/// `spectrum` command.
pub fn run(cfg: &RunConfig, ctx: &Ctx) -> Result<Vec<SpectrumResult>> {
    let setup = Setup::resolve("spectrum", cfg, ctx, SolverMode::DenseAll)?;
    let grid: Vec<(usize, f64)> =
        n_values(cfg, &[30]).into_iter().flat_map(|n| kd_values(cfg, &[0.2]).into_iter().map(move |k| (n, k))).collect();
    let count = cfg.count.unwrap_or(40);
    let results: Vec<SpectrumResult> =
        grid.par_iter().map(|&(n, kd)| compute(&setup, n, kd, count)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<SweepRecord> = results.iter().flat_map(|r| r.rows.iter().cloned()).collect();
    write_records(&setup.path("spectrum.csv"), &rows)?;
    write_json(&setup.path("spectrum-summary.json"), &results)?;
    for r in &results {
        if cfg.dump_vectors.unwrap_or(false) {
            let dump: Vec<DumpEntry> = r
                .classified
                .iter()
                .map(|(p, l)| DumpEntry { lambda: [p.lambda.re, p.lambda.im], label: l.name(), vector: complex_pairs(&p.vector) })
                .collect();
            write_json(&setup.path(&format!("spectrum-N{}-kd{}-vectors.json", r.n, kd_tag(r.kd))), &dump)?;
        }
        let mut series: Vec<Series> = Vec::new();
        for label in [StateLabel::DimerI, StateLabel::DimerII, StateLabel::Fermionic, StateLabel::Other] {
            let points: Vec<(f64, f64)> =
                r.classified.iter().filter(|c| c.1 == label).map(|(p, _)| (p.lambda.re, p.decay_rate())).collect();
            if !points.is_empty() {
                series.push(Series { name: label.name().into(), points, style: Style::Scatter });
            }
        }
        let chart = Chart {
            title: format!("two-excitation subradiant states, N={}, kd={}", r.n, kd_tag(r.kd)),
            x_label: "Re λ / Γ".into(),
            y_label: "decay rate / Γ".into(),
            log_x: false,
            log_y: true,
            series,
        };
        write_svg(&setup.out, "spectrum", &chart.render())?;
    }
    Ok(results)
}

impl SpectrumResult {
    /// CSV rows.
    pub fn rows(&self) -> &[SweepRecord] {
        &self.rows
    }

    /// Classified subradiant eigenpairs.
    pub fn classified(&self) -> &[(EigenPair, StateLabel)] {
        &self.classified
    }
}
