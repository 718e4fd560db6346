use super::{CMatrix, LinalgError, C64};
use alloc::vec::Vec;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factorizes a square matrix.
    pub fn factor(a: &CMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::Dimension { expected: a.rows(), got: a.cols() });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= f64::EPSILON * 1e-3 * scale {
                return Err(LinalgError::Singular(k));
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            let (upper, lower) = lu.as_mut_slice().split_at_mut((k + 1) * n);
            let krow = &upper[k * n..];
            for i in 0..n - k - 1 {
                let row = &mut lower[i * n..(i + 1) * n];
                let f = row[k] / pivot;
                row[k] = f;
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    row[j] -= f * krow[j];
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Dimension of the factored matrix.
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        self.solve_permuted_in_place(&mut x);
        x
    }

    /// Solves `A x = b` overwriting `b`.
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&x);
        self.solve_permuted_in_place(b);
    }

    fn solve_permuted_in_place(&self, x: &mut [C64]) {
        let n = self.dim();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in 0..i {
                s -= row[j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in i + 1..n {
                s -= row[j] * x[j];
            }
            x[i] = s / row[i];
        }
    }

    /// Determinant of the factored matrix.
    pub fn determinant(&self) -> C64 {
        let n = self.dim();
        let mut det = C64::new(1.0, 0.0);
        for i in 0..n {
            det *= self.lu[(i, i)];
        }
        let mut seen = alloc::vec![false; n];
        let mut sign = 1.0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        det * sign
    }
}
