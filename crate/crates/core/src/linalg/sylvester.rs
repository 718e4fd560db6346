use super::{CMatrix, C64};
use alloc::vec;

/// Solves `T Z + Z T − σ Z = C` for upper-triangular `T`, column by column.
///
/// `C` is given and returned column-major, i.e. as the row-major storage of `Cᵀ`.
pub fn solve_triangular_sylvester(t: &CMatrix, sigma: C64, c_cols: &mut CMatrix) {
    let n = t.rows();
    let tnorm = t.max_abs().max(f64::MIN_POSITIVE);
    let smin = f64::EPSILON * tnorm;
    let mut rhs = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        rhs.copy_from_slice(c_cols.row(j));
        for l in 0..j {
            let tlj = t[(l, j)];
            if tlj.re == 0.0 && tlj.im == 0.0 {
                continue;
            }
            let zl = c_cols.row(l);
            for (r, z) in rhs.iter_mut().zip(zl) {
                *r -= z * tlj;
            }
        }
        let shift = t[(j, j)] - sigma;
        for i in (0..n).rev() {
            let row = t.row(i);
            let mut s = rhs[i];
            for k in i + 1..n {
                s -= row[k] * rhs[k];
            }
            let mut den = row[i] + shift;
            if den.norm() < smin {
                den = C64::new(smin, 0.0);
            }
            rhs[i] = s / den;
        }
        c_cols.row_mut(j).copy_from_slice(&rhs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::distance;

    #[test]
    fn solution_satisfies_equation() {
        let n = 9;
        let t = CMatrix::from_fn(n, n, |i, j| {
            if j < i {
                C64::new(0.0, 0.0)
            } else {
                C64::new(((i + 2 * j) as f64).sin(), ((3 * i + j) as f64).cos() * 0.3 + if i == j { 0.5 } else { 0.0 })
            }
        });
        let sigma = C64::new(0.2, -0.1);
        let c = CMatrix::from_fn(n, n, |i, j| C64::new((i * j) as f64 * 0.1, i as f64 - j as f64));
        let mut z = c.transpose();
        solve_triangular_sylvester(&t, sigma, &mut z);
        let z = z.transpose();
        let lhs = t.matmul(&z);
        let lhs2 = z.matmul(&t);
        let mut total = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                total[(i, j)] = lhs[(i, j)] + lhs2[(i, j)] - sigma * z[(i, j)];
            }
        }
        assert!(distance(total.as_slice(), c.as_slice()) < 1e-11);
    }
}
