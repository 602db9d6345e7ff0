//! Singular value and polar decompositions of small square matrices.
//!
//! Both are built on the Jacobi eigensolver applied to `g^H g`. Singular
//! vectors are chosen deterministically so rank-deficient inputs still
//! produce a reproducible unitary factor:
//!
//! * right singular vectors come from the eigensolver, ordered by
//!   descending singular value and phase-fixed (largest-magnitude component
//!   real positive, lowest index on ties);
//! * left vectors for nonzero singular values are `g w / σ`, which ties
//!   their phase to the right vector;
//! * left vectors for zero singular values complete the basis by
//!   Gram-Schmidt over the standard basis in index order, then get the same
//!   phase fix.

use num_complex::Complex;
use num_traits::Zero;

use super::{eig::hermitian_eig, fix_phase, inner, matmul, norm, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `g = u · diag(sigma) · w^H`.
#[derive(Debug, Clone)]
pub struct Svd<S: Real> {
    pub u: Matrix<S>,
    pub sigma: Vec<S>,
    pub w: Matrix<S>,
}

/// `g = unitary · positive` with `positive = sqrt(g^H g)`.
#[derive(Debug, Clone)]
pub struct PolarDecomposition<S: Real> {
    pub unitary: Matrix<S>,
    pub positive: Matrix<S>,
}

pub fn svd<S: Real>(g: &Matrix<S>) -> Result<Svd<S>> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let n = g.rows();
    let gram = matmul(&g.adjoint(), g)?;
    let eig = hermitian_eig(&gram)?;

    let mut sigma = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for k in 0..n {
        let w = eig.vectors.col(k);
        // ‖g w‖ is far more accurate than sqrt(λ) when λ is near zero.
        let y = g.apply(&w)?;
        sigma.push(norm(&y));
        left.push(y);
        right.push(w);
    }
    let sigma_max = sigma.iter().copied().fold(S::zero(), S::max);
    let cutoff = sigma_max * S::epsilon() * S::lit(64.0);

    let mut basis: Vec<Vec<Complex<S>>> = Vec::with_capacity(n);
    let mut columns: Vec<Option<Vec<Complex<S>>>> = vec![None; n];
    for k in 0..n {
        if sigma[k] > cutoff {
            let mut u: Vec<Complex<S>> = left[k].iter().map(|&z| z / sigma[k]).collect();
            orthogonalize(&mut u, &basis);
            let len = norm(&u);
            if len > S::lit(0.5) {
                u.iter_mut().for_each(|z| *z = *z / len);
                basis.push(u.clone());
                columns[k] = Some(u);
                continue;
            }
        }
        sigma[k] = S::zero();
    }
    // Fill the null-space slots from the standard basis.
    let mut candidates = (0..n).map(|i| {
        let mut e = vec![Complex::zero(); n];
        e[i] = Complex::new(S::one(), S::zero());
        e
    });
    for slot in columns.iter_mut().filter(|c| c.is_none()) {
        let fill = loop {
            let mut e = candidates
                .next()
                .expect("standard basis spans the complement");
            orthogonalize(&mut e, &basis);
            let len = norm(&e);
            if len > S::lit(0.5) {
                e.iter_mut().for_each(|z| *z = *z / len);
                fix_phase(&mut e);
                break e;
            }
        };
        basis.push(fill.clone());
        *slot = Some(fill);
    }
    let columns: Vec<_> = columns.into_iter().map(|c| c.expect("filled")).collect();
    Ok(Svd {
        u: Matrix::from_columns(&columns),
        sigma,
        w: Matrix::from_columns(&right),
    })
}

fn orthogonalize<S: Real>(v: &mut [Complex<S>], basis: &[Vec<Complex<S>>]) {
    // Two passes of modified Gram-Schmidt.
    for _ in 0..2 {
        for b in basis {
            let proj = inner(b, v);
            for (x, &y) in v.iter_mut().zip(b) {
                *x = *x - proj * y;
            }
        }
    }
}

pub fn polar_decompose<S: Real>(g: &Matrix<S>) -> Result<PolarDecomposition<S>> {
    let Svd { u, sigma, w } = svd(g)?;
    let wh = w.adjoint();
    let unitary = matmul(&u, &wh)?;
    let d: Vec<_> = sigma.iter().map(|&s| Complex::new(s, S::zero())).collect();
    let raw = matmul(&matmul(&w, &Matrix::diag(&d))?, &wh)?;
    let n = raw.rows();
    let half = S::lit(0.5);
    let mut positive = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            positive[(i, j)] = (raw[(i, j)] + raw[(j, i)].conj()) * half;
        }
    }
    Ok(PolarDecomposition { unitary, positive })
}
