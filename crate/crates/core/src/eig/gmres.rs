use crate::linalg::{axpy, dotc, norm2, Givens, C64};
use alloc::vec;
use alloc::vec::Vec;

/// Restarted GMRES settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresConfig {
    /// Relative residual target `‖b − A x‖ / ‖b‖`.
    pub tol: f64,
    /// Krylov dimension per cycle.
    pub restart: usize,
    /// Iteration budget.
    pub max_iter: usize,
}

/// Result of a GMRES solve.
#[derive(Debug, Clone, PartialEq)]
pub struct GmresOutcome {
    /// Approximate solution.
    pub x: Vec<C64>,
    /// Inner iterations performed.
    pub iterations: usize,
    /// Final true relative residual.
    pub residual: f64,
    /// Whether the target was met.
    pub converged: bool,
}

/// Restarted GMRES with right preconditioning, `A M⁻¹ y = b`, `x = M⁻¹ y`.
/// Stops early when a full cycle fails to halve the residual.
pub fn gmres(
    apply: &dyn Fn(&[C64], &mut [C64]),
    precond: &dyn Fn(&[C64], &mut [C64]),
    b: &[C64],
    config: &GmresConfig,
) -> GmresOutcome {
    let n = b.len();
    let bnorm = norm2(b);
    let mut x = vec![C64::new(0.0, 0.0); n];
    if bnorm == 0.0 {
        return GmresOutcome { x, iterations: 0, residual: 0.0, converged: true };
    }
    let restart = config.restart.max(1).min(n.max(1));
    let mut r = b.to_vec();
    let mut beta = bnorm;
    let mut iterations = 0;
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut z = vec![C64::new(0.0, 0.0); n];
    loop {
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(restart + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut hess: Vec<Vec<C64>> = Vec::with_capacity(restart);
        let mut rots: Vec<Givens> = Vec::with_capacity(restart);
        let mut g = vec![C64::new(0.0, 0.0); restart + 1];
        g[0] = C64::new(beta, 0.0);
        let mut used = 0;
        for j in 0..restart {
            precond(&basis[j], &mut z);
            apply(&z, &mut w);
            let mut col = vec![C64::new(0.0, 0.0); j + 2];
            for _ in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let h = dotc(v, &w);
                    col[i] += h;
                    axpy(-h, v, &mut w);
                }
            }
            let hn = norm2(&w);
            col[j + 1] = C64::new(hn, 0.0);
            for (i, rot) in rots.iter().enumerate() {
                let (a, c) = rot.rotate(col[i], col[i + 1]);
                col[i] = a;
                col[i + 1] = c;
            }
            let (rot, rr) = Givens::new(col[j], col[j + 1]);
            col[j] = rr;
            col[j + 1] = C64::new(0.0, 0.0);
            let (g0, g1) = rot.rotate(g[j], g[j + 1]);
            g[j] = g0;
            g[j + 1] = g1;
            rots.push(rot);
            hess.push(col);
            used = j + 1;
            iterations += 1;
            if g[j + 1].norm() <= config.tol * bnorm || hn == 0.0 || iterations >= config.max_iter {
                break;
            }
            basis.push(w.iter().map(|v| v / hn).collect());
        }
        let mut y = vec![C64::new(0.0, 0.0); used];
        for i in (0..used).rev() {
            let mut s = g[i];
            for k in i + 1..used {
                s -= hess[k][i] * y[k];
            }
            y[i] = s / hess[i][i];
        }
        let mut u = vec![C64::new(0.0, 0.0); n];
        for (k, yk) in y.iter().enumerate() {
            axpy(*yk, &basis[k], &mut u);
        }
        precond(&u, &mut z);
        axpy(C64::new(1.0, 0.0), &z, &mut x);
        apply(&x, &mut w);
        for i in 0..n {
            r[i] = b[i] - w[i];
        }
        let new_beta = norm2(&r);
        let rel = new_beta / bnorm;
        if rel <= config.tol {
            return GmresOutcome { x, iterations, residual: rel, converged: true };
        }
        if iterations >= config.max_iter || new_beta > 0.5 * beta || new_beta == 0.0 {
            return GmresOutcome { x, iterations, residual: rel, converged: false };
        }
        beta = new_beta;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{distance, CMatrix};

    #[test]
    fn solves_small_nonsymmetric_system() {
        let n = 30;
        let a = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(3.0, 1.0)
            } else {
                C64::new(((i * 3 + j) as f64).sin() * 0.2, ((i + 5 * j) as f64).cos() * 0.1)
            }
        });
        let b: Vec<C64> = (0..n).map(|i| C64::new(i as f64, 1.0)).collect();
        let apply = |x: &[C64], y: &mut [C64]| a.matvec_into(x, y);
        let ident = |x: &[C64], y: &mut [C64]| y.copy_from_slice(x);
        let out = gmres(&apply, &ident, &b, &GmresConfig { tol: 1e-12, restart: 10, max_iter: 500 });
        assert!(out.converged);
        assert!(distance(&a.matvec(&out.x), &b) < 1e-10 * norm2(&b));
    }

    #[test]
    fn exact_preconditioner_converges_in_one_step() {
        let n = 12;
        let a = CMatrix::from_fn(n, n, |i, j| C64::new(if i == j { 2.0 + i as f64 } else { 0.0 }, 0.0));
        let b: Vec<C64> = (0..n).map(|i| C64::new(1.0, i as f64)).collect();
        let apply = |x: &[C64], y: &mut [C64]| a.matvec_into(x, y);
        let inv = |x: &[C64], y: &mut [C64]| {
            for i in 0..x.len() {
                y[i] = x[i] / (2.0 + i as f64);
            }
        };
        let out = gmres(&apply, &inv, &b, &GmresConfig { tol: 1e-13, restart: 5, max_iter: 50 });
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
    }
}
