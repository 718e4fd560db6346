use super::{norm2, CMatrix, Givens, LinalgError, C64};
use alloc::vec;
use alloc::vec::Vec;

const EXCEPTIONAL: f64 = 0.75;

/// Complex Schur decomposition `A = Q T Qᴴ` with `T` upper triangular and `Q` unitary.
#[derive(Debug, Clone)]
pub struct Schur {
    /// Upper-triangular factor.
    pub t: CMatrix,
    /// Unitary factor.
    pub q: CMatrix,
}

#[inline]
fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Householder reduction to upper Hessenberg form, `A = Q H Qᴴ`.
pub fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut w = vec![C64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        for i in 0..len {
            v[i] = h[(k + 1 + i, k)];
        }
        let xnorm = norm2(&v[..len]);
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = norm2(&v[..len]);
        if vnorm == 0.0 {
            continue;
        }
        for x in v[..len].iter_mut() {
            *x /= vnorm;
        }
        // left: rows k+1.., columns k..
        for x in w[k..n].iter_mut() {
            *x = C64::new(0.0, 0.0);
        }
        for i in 0..len {
            let vi = v[i].conj();
            let row = &h.row(k + 1 + i)[k..];
            for (wj, hj) in w[k..n].iter_mut().zip(row) {
                *wj += vi * hj;
            }
        }
        for i in 0..len {
            let f = v[i] * 2.0;
            let row = &mut h.row_mut(k + 1 + i)[k..];
            for (hj, wj) in row.iter_mut().zip(&w[k..n]) {
                *hj -= f * wj;
            }
        }
        for r in 0..n {
            reflect_row(&mut h.row_mut(r)[k + 1..], &v[..len]);
            reflect_row(&mut q.row_mut(r)[k + 1..], &v[..len]);
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, q)
}

fn reflect_row(row: &mut [C64], v: &[C64]) {
    let mut s = C64::new(0.0, 0.0);
    for (x, vi) in row.iter().zip(v) {
        s += x * vi;
    }
    let s = s * 2.0;
    for (x, vi) in row.iter_mut().zip(v) {
        *x -= s * vi.conj();
    }
}

/// Complex Schur decomposition by Hessenberg reduction and shifted QR sweeps.
pub fn schur(a: &CMatrix) -> Result<Schur, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Dimension { expected: a.rows(), got: a.cols() });
    }
    let n = a.rows();
    let (mut h, q) = hessenberg(a);
    let mut qt = q.transpose();
    if n <= 1 {
        return Ok(Schur { t: h, q: qt.transpose() });
    }
    let eps = f64::EPSILON;
    let safe = f64::MIN_POSITIVE * (n as f64) / eps;
    let max_total = 40 * n.max(10);
    let mut total = 0;
    let mut its = 0;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = abs1(h[(l, l - 1)]);
            if sub <= safe {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            let mut tst = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if tst == 0.0 {
                if l >= 2 {
                    tst += h[(l - 1, l - 2)].re.abs();
                }
                if l + 1 <= hi {
                    tst += h[(l + 1, l)].re.abs();
                }
            }
            if sub <= eps * tst {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        if total >= max_total {
            return Err(LinalgError::NoConvergence { iterations: total, remaining: hi + 1 });
        }
        let mu = if its == 10 {
            h[(l, l)] + EXCEPTIONAL * h[(l + 1, l)].re.abs()
        } else if its == 20 {
            h[(hi, hi)] + EXCEPTIONAL * h[(hi, hi - 1)].re.abs()
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, &mut qt, l, hi, mu);
        its += 1;
        total += 1;
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(Schur { t: h, q: qt.transpose() })
}

fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let m1 = mean + disc;
    let m2 = mean - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn qr_sweep(h: &mut CMatrix, qt: &mut CMatrix, l: usize, hi: usize, mu: C64) {
    let n = h.rows();
    let mut x = h[(l, l)] - mu;
    let mut y = h[(l + 1, l)];
    for k in l..hi {
        if k > l {
            x = h[(k, k - 1)];
            y = h[(k + 1, k - 1)];
        }
        let (g, r) = Givens::new(x, y);
        if k > l {
            h[(k, k - 1)] = r;
            h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
        }
        rotate_rows(h, &g, k, k, n);
        let last = (k + 2).min(hi);
        for i in 0..=last {
            let (a, b) = g.rotate_adjoint_right(h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = a;
            h[(i, k + 1)] = b;
        }
        let conj = Givens { c: g.c, s: g.s.conj() };
        rotate_rows(qt, &conj, k, 0, n);
    }
}

fn rotate_rows(m: &mut CMatrix, g: &Givens, k: usize, from: usize, to: usize) {
    let cols = m.cols();
    let (top, bottom) = m.as_mut_slice().split_at_mut((k + 1) * cols);
    let r0 = &mut top[k * cols + from..k * cols + to];
    let r1 = &mut bottom[from..to];
    for (a, b) in r0.iter_mut().zip(r1.iter_mut()) {
        let (na, nb) = g.rotate(*a, *b);
        *a = na;
        *b = nb;
    }
}

impl Schur {
    /// Diagonal of `T`.
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Exchanges the diagonal entries `j` and `j + 1` by a unitary similarity.
    pub fn swap_adjacent(&mut self, j: usize) {
        let n = self.t.rows();
        let a = self.t[(j, j)];
        let c = self.t[(j + 1, j + 1)];
        let b = self.t[(j, j + 1)];
        let (g, _) = Givens::new(b, c - a);
        rotate_rows(&mut self.t, &g, j, j, n);
        for i in 0..=j + 1 {
            let (x, y) = g.rotate_adjoint_right(self.t[(i, j)], self.t[(i, j + 1)]);
            self.t[(i, j)] = x;
            self.t[(i, j + 1)] = y;
        }
        for i in 0..n {
            let (x, y) = g.rotate_adjoint_right(self.q[(i, j)], self.q[(i, j + 1)]);
            self.q[(i, j)] = x;
            self.q[(i, j + 1)] = y;
        }
        self.t[(j + 1, j)] = C64::new(0.0, 0.0);
        self.t[(j, j)] = c;
        self.t[(j + 1, j + 1)] = a;
    }

    /// Moves the selected eigenvalues to the leading block, keeping their relative order.
    pub fn reorder(&mut self, select: &[bool]) {
        let mut front = 0;
        for k in 0..select.len() {
            if select[k] {
                for j in (front..k).rev() {
                    self.swap_adjacent(j);
                }
                front += 1;
            }
        }
    }

    /// Unit-norm eigenvectors of the original matrix, as columns.
    pub fn eigenvectors(&self) -> CMatrix {
        let x = triangular_eigenvectors(&self.t);
        let n = self.t.rows();
        let mut v = CMatrix::zeros(n, n);
        for i in 0..n {
            let qrow = self.q.row(i);
            let vrow = v.row_mut(i);
            for k in 0..n {
                let xrow = x.row(k);
                let qk = qrow[k];
                for j in k..n {
                    vrow[j] += qk * xrow[j];
                }
            }
        }
        for j in 0..n {
            let col = v.column(j);
            let nrm = norm2(&col);
            if nrm > 0.0 {
                for i in 0..n {
                    v[(i, j)] /= nrm;
                }
            }
        }
        v
    }
}

/// Eigenvectors of an upper-triangular matrix as columns (upper triangular, unit diagonal up to scaling).
pub fn triangular_eigenvectors(t: &CMatrix) -> CMatrix {
    let n = t.rows();
    let tnorm = t.max_abs().max(f64::MIN_POSITIVE);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let mut x = CMatrix::zeros(n, n);
    let mut col = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let lam = t[(k, k)];
        col[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let row = t.row(i);
            let mut s = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += row[j] * col[j];
            }
            let mut den = row[i] - lam;
            if den.norm() < smin {
                den = C64::new(smin, 0.0);
            }
            col[i] = -s / den;
            if col[i].norm() > 1e150 {
                let f = 1.0 / col[i].norm();
                for v in col[i..=k].iter_mut() {
                    *v *= f;
                }
            }
        }
        for i in 0..=k {
            x[(i, k)] = col[i];
        }
    }
    x
}
