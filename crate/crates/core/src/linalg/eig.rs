//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.

use num_complex::Complex;
use num_traits::Zero;

use super::{fix_phase, matmul, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// `a = vectors · diag(values) · vectors^H`, values sorted descending.
#[derive(Debug, Clone)]
pub struct HermitianEig<S: Real> {
    pub values: Vec<S>,
    pub vectors: Matrix<S>,
}

impl<S: Real> HermitianEig<S> {
    pub fn reconstruct(&self) -> Matrix<S> {
        let d: Vec<_> = self
            .values
            .iter()
            .map(|&l| Complex::new(l, S::zero()))
            .collect();
        let vd = matmul(&self.vectors, &Matrix::diag(&d)).expect("square");
        matmul(&vd, &self.vectors.adjoint()).expect("square")
    }
}

pub fn hermitian_eig<S: Real>(a: &Matrix<S>) -> Result<HermitianEig<S>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let deviation = a.hermitian_deviation();
    if deviation > S::check_tol() {
        return Err(Error::NotHermitian {
            deviation: deviation.to_f64_lossy(),
        });
    }
    let n = a.rows();
    // Work on the exactly-Hermitian part so rounding in the input cannot bias the sweep.
    let half = S::lit(0.5);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (a[(i, j)] + a[(j, i)].conj()) * half;
        }
    }
    let mut v = Matrix::identity(n);

    let scale = m.as_slice().iter().map(|z| z.norm_sqr()).sum::<S>().sqrt();
    let threshold = S::epsilon() * S::epsilon() * scale * scale;

    for _ in 0..MAX_SWEEPS {
        let off: S = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(j, j)]
            .re
            .partial_cmp(&m[(i, i)].re)
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let columns: Vec<Vec<Complex<S>>> = order
        .iter()
        .map(|&k| {
            let mut c = v.col(k);
            fix_phase(&mut c);
            c
        })
        .collect();
    Ok(HermitianEig {
        values,
        vectors: Matrix::from_columns(&columns),
    })
}

/// One Jacobi rotation zeroing `m[(p, q)]`; `m ← J^H m J`, `v ← v J`.
fn rotate<S: Real>(m: &mut Matrix<S>, v: &mut Matrix<S>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == S::zero() {
        return;
    }
    let n = m.rows();
    let phase = apq / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (S::lit(2.0) * mag);
    let t = if theta == S::zero() {
        S::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt())
    };
    let c = S::one() / (t * t + S::one()).sqrt();
    let s = t * c;
    // J restricted to (p, q): [[c, s·e], [-s·ē, c]]
    let jpp = Complex::new(c, S::zero());
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let jqq = Complex::new(c, S::zero());

    // m ← m J (columns p, q)
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
    }
    // m ← J^H m (rows p, q)
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = Complex::zero();
    m[(q, p)] = Complex::zero();
    m[(p, p)] = Complex::new(m[(p, p)].re, S::zero());
    m[(q, q)] = Complex::new(m[(q, q)].re, S::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as rounding noise and clamped
/// to zero; anything more negative is rejected.
pub fn hermitian_sqrt<S: Real>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let mut eig = hermitian_eig(a)?;
    let floor = -S::clamp_tol();
    for l in eig.values.iter_mut() {
        if *l < floor {
            return Err(Error::NegativeOperator {
                eigenvalue: l.to_f64_lossy(),
            });
        }
        *l = l.max(S::zero()).sqrt();
    }
    let root = eig.reconstruct();
    // Symmetrize to remove rounding asymmetry.
    let n = root.rows();
    let half = S::lit(0.5);
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (root[(i, j)] + root[(j, i)].conj()) * half;
        }
    }
    Ok(out)
}
