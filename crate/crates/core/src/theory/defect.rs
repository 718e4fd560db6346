#[allow(unused_imports)]
use num_traits::Float;
use super::{boundary_root, expi, omega_q, TheoryError};
use crate::linalg::C64;

/// Subradiant root of the missing-site secular equation near `q_I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectSolution {
    /// Newton root `q·d`.
    pub q: C64,
    /// `ω_q` at the root; the missing-site eigenvalue.
    pub omega_q: C64,
    /// First-order correction `q − q_I` from linearising the secular equation.
    pub delta: C64,
    /// Emitter count including the empty site.
    pub n: usize,
    /// One-based empty site.
    pub m: usize,
    /// `min(m − 1, N − m)`.
    pub min_nlr: usize,
    /// Left boundary amplitude, co-propagating.
    pub g_l: C64,
    /// Right boundary amplitude, co-propagating.
    pub g_r: C64,
    /// Left boundary amplitude, counter-propagating.
    pub h_l: C64,
    /// Right boundary amplitude, counter-propagating.
    pub h_r: C64,
    /// Geometric sum over the left segment.
    pub beta: C64,
    /// Geometric sum over the right segment.
    pub theta: C64,
    /// `A_q = 2 − 2cos(q − kd)`.
    pub a_q: C64,
    /// `|f(q)|` at the root.
    pub residual: f64,
    /// Newton steps.
    pub iterations: usize,
    /// Whether the `e^{2iq(N−1)}` term was retained.
    pub full_equation: bool,
}

impl DefectSolution {
    /// Decay rate `−2 Im ω_q`.
    pub fn decay_rate(&self) -> f64 {
        -2.0 * self.omega_q.im
    }
}

fn a_of(q: C64, kd: f64) -> C64 {
    C64::new(2.0, 0.0) - (q - kd).cos() * 2.0
}

fn check(n: usize, kd: f64, m: usize) -> Result<(), TheoryError> {
    if !(kd > 0.0 && kd < core::f64::consts::FRAC_PI_2) {
        return Err(TheoryError::Domain("kd must lie in (0, π/2)"));
    }
    if n < 3 || m < 2 || m > n - 1 {
        return Err(TheoryError::Domain("empty site must be interior (2 ≤ m ≤ N−1)"));
    }
    Ok(())
}

/// Secular function with and without the `e^{2iq(N−1)}` term, and its derivative.
fn secular_with_derivative(n: usize, kd: f64, m: usize, q: C64, full: bool) -> (C64, C64) {
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let e2k = expi(C64::new(2.0 * kd, 0.0));
    let ap = a_of(q, kd);
    let am = a_of(-q, kd);
    let dap = (q - kd).sin() * 2.0;
    let dam = -(-q - kd).sin() * 2.0;
    let r = am / ap;
    let dr = (dam * ap - am * dap) / (ap * ap);
    let (nr, nl) = ((n - m) as f64, (m - 1) as f64);
    let er = expi(q * (2.0 * nr));
    let el = expi(q * (2.0 * nl));
    let mut f = r - e2k - (one - e2k) * (er + el);
    let mut df = dr - (one - e2k) * (i * 2.0 * nr * er + i * 2.0 * nl * el);
    if full {
        let nn = (n - 1) as f64;
        let en = expi(q * (2.0 * nn));
        let inv = one / r;
        f += en * (inv - e2k);
        df += i * 2.0 * nn * en * (inv - e2k) - en * dr / (r * r);
    }
    (f, df)
}

/// Secular function whose zero near `q_I` is the subradiant missing-site state (`d = 1`).
pub fn secular_function(n: usize, kd: f64, m: usize, q: C64, full: bool) -> C64 {
    secular_with_derivative(n, kd, m, q, full).0
}

/// `δ = −(i/2) sin kd tan kd e^{−ikd} [c^{2(N−m)} + c^{2(m−1)}]`, `c = cos kd`.
pub fn defect_delta(n: usize, kd: f64, m: usize) -> Result<C64, TheoryError> {
    check(n, kd, m)?;
    let c = kd.cos();
    let s = c.powi(2 * (n - m) as i32) + c.powi(2 * (m - 1) as i32);
    Ok(C64::new(0.0, -0.5) * kd.sin() * kd.tan() * expi(C64::new(-kd, 0.0)) * s)
}

/// Newton solve seeded at `q_I`.
pub fn solve_defect_secular(n: usize, kd: f64, m: usize) -> Result<DefectSolution, TheoryError> {
    check(n, kd, m)?;
    let full = kd.cos().powi(n as i32) > 1e-12;
    let mut q = boundary_root(kd);
    let (mut f, mut df) = secular_with_derivative(n, kd, m, q, full);
    let mut iterations = 0;
    while iterations < 100 && f.norm() > 1e-15 {
        iterations += 1;
        let step = f / df;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial = q - step * scale;
            let (ft, dft) = secular_with_derivative(n, kd, m, trial, full);
            if ft.norm() < f.norm() {
                q = trial;
                f = ft;
                df = dft;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted || (step * scale).norm() < 1e-15 * q.norm().max(1.0) {
            break;
        }
    }
    if f.norm() > 1e-10 || q.im <= 0.0 {
        return Err(TheoryError::NewtonFailed { q, residual: f.norm(), iterations });
    }
    let k = C64::new(kd, 0.0);
    let one = C64::new(1.0, 0.0);
    let (em, ep) = (expi(q - k), expi(q + k));
    let (z1, zm, zn) = (1.0, m as f64, n as f64);
    let g_l = expi((q - k) * z1) / (one - em);
    let g_r = expi((q - k) * (zm + 1.0)) / (one - em);
    let h_l = expi((q + k) * zm) / (one - ep);
    let h_r = expi((q + k) * (zn + 1.0)) / (one - ep);
    let beta = (expi((q - k) * z1) - expi((q - k) * zm)) / (one - em);
    let theta = (expi((q + k) * (zm + 1.0)) - expi((q + k) * (zn + 1.0))) / (one - ep);
    Ok(DefectSolution {
        q,
        omega_q: omega_q(kd, q),
        delta: defect_delta(n, kd, m)?,
        n,
        m,
        min_nlr: (m - 1).min(n - m),
        g_l,
        g_r,
        h_l,
        h_r,
        beta,
        theta,
        a_q: a_of(q, kd),
        residual: f.norm(),
        iterations,
        full_equation: full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::schur;
    use crate::model::{build_missing_site_hamiltonian, ChainGeometry};
    use core::f64::consts::PI;

    fn missing_site_nearest(n: usize, kd: f64, m: usize, target: C64) -> C64 {
        let chain = ChainGeometry::uniform(n, kd).unwrap();
        let h = build_missing_site_hamiltonian(&chain, &chain.waveguide_kernel(), m - 1).unwrap();
        let e = schur(&h).unwrap().eigenvalues();
        *e.iter().min_by(|a, b| (**a - target).norm().partial_cmp(&(**b - target).norm()).unwrap()).unwrap()
    }

    #[test]
    fn root_matches_missing_site_eigenvalue() {
        for (n, kd, m) in [(30, 0.25 * PI, 10), (40, 0.3 * PI, 20), (24, 0.2 * PI, 8), (50, 0.35 * PI, 13)] {
            let sol = solve_defect_secular(n, kd, m).unwrap();
            let num = missing_site_nearest(n, kd, m, sol.omega_q);
            assert!((num - sol.omega_q).norm() < 1e-9, "n={n} m={m}: {num} vs {}", sol.omega_q);
            let rel = (sol.decay_rate() - (-2.0 * num.im)).abs() / (-2.0 * num.im);
            assert!(rel < 1e-4, "n={n} m={m} rel={rel}");
        }
    }

    #[test]
    fn delta_is_first_order_correction() {
        for (n, kd, m) in [(60, 0.25 * PI, 20), (80, 0.3 * PI, 30), (60, 0.2 * PI, 45)] {
            let sol = solve_defect_secular(n, kd, m).unwrap();
            let shift = sol.q - boundary_root(kd);
            assert!((shift - sol.delta).norm() < 0.05 * sol.delta.norm(), "n={n} m={m}");
            assert!(sol.delta.im < 0.0);
        }
    }

    #[test]
    fn decay_follows_min_nlr() {
        let kd = 0.3 * PI;
        let rate = |m: usize| solve_defect_secular(120, kd, m).unwrap().decay_rate();
        let slope = (rate(16).ln() - rate(12).ln()) / 4.0;
        assert!((slope - 2.0 * kd.cos().ln()).abs() < 0.02);
    }

    #[test]
    fn rejects_edges() {
        assert!(solve_defect_secular(20, 0.3, 1).is_err());
        assert!(solve_defect_secular(20, 0.3, 20).is_err());
        assert!(solve_defect_secular(20, 0.0, 5).is_err());
    }
}
