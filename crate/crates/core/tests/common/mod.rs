//! Independent oracles shared by the integration suites. Nothing here goes
//! through the library's circuit or decomposition code.
#![allow(dead_code)]

use kerr_teleport::{Complex64 as C, ComplexMatrix};
use rand::Rng;

pub const I: C = C::new(0.0, 1.0);

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn to_matrix(m: [[C; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&m)
}

/// Branch operators typed in from their closed forms.
pub fn golden_g(phi: f64) -> [[[C; 2]; 2]; 4] {
    let e = C::from_polar(1.0, phi / 2.0);
    let (s, co) = ((phi / 2.0).sin(), (phi / 2.0).cos());
    let off = -I * e * s;
    let diag = e * co;
    let h = c(0.5);
    [
        [[c(0.0), off * h], [c(1.0) * h, diag * h]],
        [[c(1.0) * h, diag * h], [c(0.0), off * h]],
        [[c(0.0), off * h], [c(-1.0) * h, diag * h]],
        [[c(-1.0) * h, diag * h], [c(0.0), off * h]],
    ]
}

/// Bob's corrections typed in from their closed forms.
pub fn golden_u(phi: f64) -> [[[C; 2]; 2]; 4] {
    let a = (std::f64::consts::PI + phi) / 4.0;
    let b = (std::f64::consts::PI - phi) / 4.0;
    let e = C::from_polar(1.0, -phi / 2.0);
    [
        [[-I * a.cos(), c(a.sin())], [I * e * a.sin(), e * a.cos()]],
        [[c(b.cos()), -I * b.sin()], [e * b.sin(), I * e * b.cos()]],
        [[I * a.cos(), c(-a.sin())], [I * e * a.sin(), e * a.cos()]],
        [[c(-b.cos()), I * b.sin()], [e * b.sin(), I * e * b.cos()]],
    ]
}

/// `|tr(A^H B)| / 2`: 1 iff the unitaries agree up to a global phase.
pub fn map_fidelity(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut t = c(0.0);
    for i in 0..2 {
        for k in 0..2 {
            t += a[(k, i)].conj() * b[(k, i)];
        }
    }
    t.norm() / 2.0
}

pub fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// Dense square matrices as nested vectors.
pub type Dense = Vec<Vec<C>>;

pub fn dense_identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 })).collect())
        .collect()
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn dense_kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![c(0.0); ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn dense_adjoint(a: &Dense) -> Dense {
    (0..a[0].len())
        .map(|j| (0..a.len()).map(|i| a[i][j].conj()).collect())
        .collect()
}

pub fn dense_apply(a: &Dense, v: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// The two-photon analyzer circuit built entry by entry.
pub fn dense_disentangler(phi: f64) -> Dense {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r: Dense = vec![vec![c(h), c(-h)], vec![c(h), c(h)]];
    let id = dense_identity(2);
    let r1 = dense_kron(&r, &id);
    let r2 = dense_kron(&id, &r);
    let mut p = dense_identity(4);
    p[3][3] = C::from_polar(1.0, phi);
    dense_mul(
        &dense_mul(&dense_mul(&dense_adjoint(&r1), &r2), &p),
        &dense_adjoint(&r2),
    )
}

/// Full three-photon state `(D ⊗ I)(|ψ⟩ ⊗ |ψ⁺⟩)` as 8 amplitudes.
pub fn dense_three_photon(phi: f64, psi: [C; 2]) -> Vec<C> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let resource = [c(0.0), c(h), c(h), c(0.0)];
    let input: Vec<C> = psi
        .iter()
        .flat_map(|a| resource.iter().map(move |b| a * b))
        .collect();
    let full = dense_kron(&dense_disentangler(phi), &dense_identity(2));
    dense_apply(&full, &input)
}

/// Uniform Bloch-sphere qubit.
pub fn haar_qubit(rng: &mut impl Rng) -> [C; 2] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let az: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let th = z.acos();
    [c((th / 2.0).cos()), C::from_polar((th / 2.0).sin(), az)]
}

/// ZYZ-parametrized 2x2 unitary with a global phase.
pub fn unitary_from_params(p: &[f64]) -> [[C; 2]; 2] {
    let (alpha, beta, gamma, delta) = (p[0], p[1], p[2], p[3]);
    let g = C::from_polar(1.0, alpha);
    let (s, co) = ((gamma / 2.0).sin(), (gamma / 2.0).cos());
    [
        [
            g * C::from_polar(co, (-beta - delta) / 2.0),
            -g * C::from_polar(s, (-beta + delta) / 2.0),
        ],
        [
            g * C::from_polar(s, (beta - delta) / 2.0),
            g * C::from_polar(co, (beta + delta) / 2.0),
        ],
    ]
}

pub fn mul2(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[c(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Minimizes `f` with the adaptive Nelder-Mead simplex method.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    max_evals: usize,
    ftol: f64,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) =
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut evals = n + 1;
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if (simplex[n].1 - simplex[0].1).abs() < ftol {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / nf)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(alpha);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(alpha * beta);
            let fe = f(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let x = along(alpha * gamma);
                let fx = f(&x);
                (x, fx)
            } else {
                let x = along(-gamma);
                let fx = f(&x);
                (x, fx)
            };
            evals += 1;
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + delta * (*xi - bi);
                    }
                    *fx = f(x);
                }
                evals += n;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let (x, fx) = simplex.swap_remove(0);
    (x, fx)
}
