//! Dense complex linear algebra for the small dimensions used by the
//! protocol (2, 4 and 8).
//!
//! Matrices are row-major. Kronecker products put the left operand in the
//! most significant slot, so `kron(a, b)` acting on `|x⟩ ⊗ |y⟩` applies `a`
//! to `x` and `b` to `y`.

mod eig;
mod polar;

pub use eig::{hermitian_eig, hermitian_sqrt, HermitianEig};
pub use polar::{polar_decompose, svd, PolarDecomposition, Svd};

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, PartialEq)]
pub struct Matrix<S: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<S>>,
}

impl<S: Real> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<S>>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices. Panics on ragged input; intended for literals.
    pub fn from_rows<R: AsRef<[Complex<S>]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let data: Vec<_> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.as_ref().len(), cols, "ragged matrix literal");
                r.as_ref().iter().copied()
            })
            .collect();
        Self::new(rows.len(), cols, data).expect("valid matrix literal")
    }

    pub fn from_real_rows<R: AsRef<[S]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Complex<S>>> = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .iter()
                    .map(|&x| Complex::new(x, S::zero()))
                    .collect()
            })
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn diag(entries: &[Complex<S>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Column vector from amplitudes.
    pub fn column(entries: &[Complex<S>]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(cols: &[Vec<Complex<S>>]) -> Self {
        let rows = cols[0].len();
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &z) in c.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<S>] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<Complex<S>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        matmul(self, rhs)
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        kron(self, rhs)
    }

    pub fn adjoint(&self) -> Self {
        adjoint(self)
    }

    pub fn scale(&self, k: Complex<S>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: S) -> Self {
        self.scale(Complex::new(k, S::zero()))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        op: &'static str,
        f: impl Fn(Complex<S>, Complex<S>) -> Complex<S>,
    ) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `self · v` for a plain amplitude vector.
    pub fn apply(&self, v: &[Complex<S>]) -> Result<Vec<Complex<S>>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn trace(&self) -> Complex<S> {
        (0..self.rows.min(self.cols)).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Max-abs entry norm of `self - rhs`; `S::infinity()` on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> S {
        if self.shape() != rhs.shape() {
            return S::infinity();
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(S::zero(), S::max)
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().map(|z| z.norm()).fold(S::zero(), S::max)
    }

    /// Max-abs deviation of `A - A^H`; infinite when not square.
    pub fn hermitian_deviation(&self) -> S {
        if !self.is_square() {
            return S::infinity();
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// Max-abs deviation of `A^H A - I`; infinite when not square.
    pub fn unitary_deviation(&self) -> S {
        if !self.is_square() {
            return S::infinity();
        }
        let gram = matmul(&self.adjoint(), self).expect("square");
        gram.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_hermitian(&self, tol: S) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: S) -> bool {
        self.unitary_deviation() <= tol
    }

    pub fn map_scalar<T: Real>(&self, f: impl Fn(S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(f(z.re), f(z.im)))
                .collect(),
        }
    }
}

impl<S: Real> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = Complex<S>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<S> {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl<S: Real> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<S> {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Real> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn matmul<S: Real>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                out.data[i * b.cols + j] = out.data[i * b.cols + j] + aik * b.data[k * b.cols + j];
            }
        }
    }
    Ok(out)
}

pub fn kron<S: Real>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = Matrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let x = a[(ai, aj)];
            for bi in 0..b.rows {
                for bj in 0..b.cols {
                    out[(ai * b.rows + bi, aj * b.cols + bj)] = x * b[(bi, bj)];
                }
            }
        }
    }
    out
}

pub fn adjoint<S: Real>(a: &Matrix<S>) -> Matrix<S> {
    let mut out = Matrix::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

/// Inner product `⟨a|b⟩` (conjugate-linear in `a`).
pub fn inner<S: Real>(a: &[Complex<S>], b: &[Complex<S>]) -> Complex<S> {
    a.iter()
        .zip(b)
        .fold(Complex::zero(), |acc, (&x, &y)| acc + x.conj() * y)
}

pub fn norm<S: Real>(v: &[Complex<S>]) -> S {
    v.iter().map(|z| z.norm_sqr()).sum::<S>().sqrt()
}

/// Rotates the phase of `v` so that its largest-magnitude component is real
/// and positive. Components within a relative `1e-9` of the maximum count as
/// tied, and the lowest index wins.
pub(crate) fn fix_phase<S: Real>(v: &mut [Complex<S>]) {
    let max = v.iter().map(|z| z.norm()).fold(S::zero(), S::max);
    if max == S::zero() {
        return;
    }
    let cut = max * (S::one() - S::lit(1e-9));
    let pivot = v
        .iter()
        .position(|z| z.norm() >= cut)
        .expect("max attained");
    let z = v[pivot];
    let phase = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x = *x * phase;
    }
    v[pivot] = Complex::new(v[pivot].re, S::zero());
}

/// Pauli and identity matrices used throughout the crate and its tests.
pub mod pauli {
    use super::*;

    fn c<S: Real>(re: f64, im: f64) -> Complex<S> {
        Complex::new(S::lit(re), S::lit(im))
    }

    pub fn x<S: Real>() -> Matrix<S> {
        Matrix::from_rows(&[[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
    }

    pub fn y<S: Real>() -> Matrix<S> {
        Matrix::from_rows(&[[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]])
    }

    pub fn z<S: Real>() -> Matrix<S> {
        Matrix::from_rows(&[[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]])
    }
}
