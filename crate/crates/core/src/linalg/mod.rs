//! Dense complex matrices and the small set of kernels the solvers are built on.

mod lu;
mod schur;
mod sylvester;

pub use lu::Lu;
pub use schur::{hessenberg, schur, triangular_eigenvectors, Schur};
pub use sylvester::solve_triangular_sylvester;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
use num_complex::Complex;
#[allow(unused_imports)]
use num_traits::Float;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// Failures of the dense kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    /// A pivot vanished during factorization.
    #[error("matrix is singular to working precision (pivot {0})")]
    Singular(usize),
    /// The QR iteration did not deflate.
    #[error("QR iteration failed to converge after {iterations} sweeps ({remaining} eigenvalues left)")]
    NoConvergence {
        /// Sweeps performed.
        iterations: usize,
        /// Eigenvalues still undeflated.
        remaining: usize,
    },
    /// Operand shapes disagree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension {
        /// Expected size.
        expected: usize,
        /// Received size.
        got: usize,
    },
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix with entries `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Wraps row-major storage.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// True for square matrices.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major storage.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Mutable row-major storage.
    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Consumes the matrix, returning its storage.
    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// Row `i`.
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Mutable row `i`.
    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of column `j`.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Plain transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        self.matvec_into(x, &mut y);
        y
    }

    /// `y = A x` into a caller buffer.
    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.cols, "matvec operand length");
        assert_eq!(y.len(), self.rows, "matvec output length");
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dotu(self.row(i), x);
        }
    }

    /// Matrix product `A B`.
    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul inner dimension");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                axpy(a, other.row(k), orow);
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        worst
    }

    /// `A - s I`.
    pub fn shifted(&self, s: C64) -> CMatrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] -= s;
        }
        m
    }

    /// Sub-block with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Unconjugated dot product `Σ a_i b_i`.
pub fn dotu(a: &[C64], b: &[C64]) -> C64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re - x.im * y.im;
        im += x.re * y.im + x.im * y.re;
    }
    C64::new(re, im)
}

/// Hermitian inner product `Σ conj(a_i) b_i`.
pub fn dotc(a: &[C64], b: &[C64]) -> C64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    C64::new(re, im)
}

/// `y += a x`.
pub fn axpy(a: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Euclidean norm.
pub fn norm2(x: &[C64]) -> f64 {
    let scale = x.iter().fold(0.0f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = x.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

/// Scales `x` in place.
pub fn scale(x: &mut [C64], a: C64) {
    for v in x.iter_mut() {
        *v *= a;
    }
}

/// Normalizes `x` to unit length and returns the previous norm.
pub fn normalize(x: &mut [C64]) -> f64 {
    let n = norm2(x);
    if n > 0.0 {
        scale(x, C64::new(1.0 / n, 0.0));
    }
    n
}

/// `‖a - b‖₂`.
pub fn distance(a: &[C64], b: &[C64]) -> f64 {
    let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm2(&d)
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(x, y)` to `(r, 0)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Givens {
    pub c: f64,
    pub s: C64,
}

impl Givens {
    pub fn new(x: C64, y: C64) -> (Self, C64) {
        let ax = x.norm();
        let ay = y.norm();
        if ay == 0.0 {
            return (Self { c: 1.0, s: C64::new(0.0, 0.0) }, x);
        }
        if ax == 0.0 {
            return (Self { c: 0.0, s: y.conj() / ay }, C64::new(ay, 0.0));
        }
        let norm = ax.hypot(ay);
        let phase = x / ax;
        let g = Self { c: ax / norm, s: phase * y.conj() / norm };
        (g, phase * norm)
    }

    /// Left application to the pair `(a, b)`.
    #[inline]
    pub fn rotate(&self, a: C64, b: C64) -> (C64, C64) {
        (a * self.c + self.s * b, b * self.c - self.s.conj() * a)
    }

    /// Right application of the adjoint to the pair `(a, b)` of row entries.
    #[inline]
    pub fn rotate_adjoint_right(&self, a: C64, b: C64) -> (C64, C64) {
        (a * self.c + b * self.s.conj(), b * self.c - a * self.s)
    }
}
