//! Bloch-sphere average fidelity by three independent routes:
//!
//! * closed form `2/3 + sin(φ/2)/3`;
//! * product-rule quadrature (Gauss-Legendre in `cos θ`, trapezoid in the
//!   azimuth) of `Σᵢ |⟨ψ|Rᵢ|ψ⟩|²`;
//! * seeded Monte Carlo over uniformly drawn inputs of `⟨ψ|ρ_out|ψ⟩`, built
//!   from the full output density operator.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{ConditionalPhase, State};
use crate::rng::{stream, Purpose};
use crate::scalar::Real;
use crate::teleport::{state_fidelity, Channel};

/// Best average fidelity reachable without shared entanglement.
pub const CLASSICAL_BOUND: f64 = 2.0 / 3.0;

pub const MIN_QUADRATURE_ORDER: usize = 8;
pub const MIN_MC_SAMPLES: usize = 100;

/// Samples handled by one random stream; fixed so results do not depend on
/// the thread count.
const MC_CHUNK: usize = 4096;

/// Point on the Bloch sphere, `cos(θ/2)|H⟩ + e^{iϕ} sin(θ/2)|V⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint<S: Real = f64> {
    theta: S,
    azimuth: S,
}

impl<S: Real> BlochPoint<S> {
    pub fn new(theta: S, azimuth: S) -> Result<Self> {
        if !(theta >= S::zero() && theta <= S::PI()) {
            return Err(Error::InvalidParameter(format!(
                "polar angle {theta} outside [0, pi]"
            )));
        }
        if !(azimuth >= S::zero() && azimuth < S::TAU()) {
            return Err(Error::InvalidParameter(format!(
                "azimuth {azimuth} outside [0, 2pi)"
            )));
        }
        Ok(Self { theta, azimuth })
    }

    /// Uniform on the sphere: `cos θ ~ U[-1, 1]`, azimuth `~ U[0, 2π)`.
    pub fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let az: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        Self {
            theta: S::lit(z.acos()),
            azimuth: S::lit(az),
        }
    }

    pub fn theta(&self) -> S {
        self.theta
    }

    pub fn azimuth(&self) -> S {
        self.azimuth
    }

    pub fn state(&self) -> State<S> {
        let half = self.theta / S::lit(2.0);
        State::new(
            1,
            vec![
                Complex::new(half.cos(), S::zero()),
                Complex::from_polar(half.sin(), self.azimuth),
            ],
        )
        .expect("unit Bloch vector")
    }

    /// `(x, y, z)` Bloch coordinates.
    pub fn cartesian(&self) -> [S; 3] {
        let s = self.theta.sin();
        [
            s * self.azimuth.cos(),
            s * self.azimuth.sin(),
            self.theta.cos(),
        ]
    }
}

pub fn analytic_favg<S: Real>(phi: ConditionalPhase<S>) -> S {
    let three = S::lit(3.0);
    S::lit(2.0) / three + (phi.radians() / S::lit(2.0)).sin() / three
}

/// True iff the closed-form average fidelity strictly exceeds 2/3.
pub fn beats_classical<S: Real>(phi: ConditionalPhase<S>) -> bool {
    // 2/3 + sin(φ/2)/3 > 2/3  ⇔  sin(φ/2) > 0; avoids absorbing tiny φ into 2/3.
    (phi.radians() / S::lit(2.0)).sin() > S::zero()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<S: Real>(n: usize) -> (Vec<S>, Vec<S>) {
    assert!(n > 0, "quadrature needs at least one node");
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (
        nodes.into_iter().map(S::lit).collect(),
        weights.into_iter().map(S::lit).collect(),
    )
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `(1/4π) ∫ f dΩ` with `order` Gauss-Legendre nodes in `cos θ` and `order`
/// equally spaced azimuths.
pub fn sphere_average<S: Real>(order: usize, f: impl Fn(&BlochPoint<S>) -> S) -> S {
    let (nodes, weights) = gauss_legendre::<S>(order);
    let step = S::TAU() / S::lit(order as f64);
    let mut total = S::zero();
    for (&z, &w) in nodes.iter().zip(&weights) {
        let theta = z.acos();
        let ring: S = (0..order)
            .map(|k| {
                f(&BlochPoint {
                    theta,
                    azimuth: step * S::lit(k as f64),
                })
            })
            .sum();
        total = total + w * ring;
    }
    total / (S::lit(2.0) * S::lit(order as f64))
}

/// Quadrature of `Σᵢ |⟨ψ|Rᵢ(φ)|ψ⟩|²` over the sphere.
pub fn quadrature_favg<S: Real>(phi: ConditionalPhase<S>, order: usize) -> Result<S> {
    if order < MIN_QUADRATURE_ORDER {
        return Err(Error::InvalidParameter(format!(
            "quadrature order must be >= {MIN_QUADRATURE_ORDER}, got {order}"
        )));
    }
    let channel = Channel::new(phi);
    Ok(sphere_average(order, |p| {
        channel.fidelity_from_positive_factors(&p.state())
    }))
}

/// Streaming mean and variance (Welford), mergeable across chunks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        Self { n, mean, m2 }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2.max(0.0) / (self.n - 1) as f64).sqrt()
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.std_dev() / (self.n as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Runs `f` over `samples` uniformly drawn Bloch points, split into
/// fixed-size chunks with one random stream each, and merges in chunk order.
pub fn sample_sphere<S: Real>(
    samples: usize,
    seed: u64,
    f: impl Fn(&BlochPoint<S>) -> Result<f64> + Sync,
) -> Result<RunningStats> {
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<RunningStats> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, Purpose::FidelitySampling, c as u64);
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut stats = RunningStats::default();
            for _ in 0..len {
                stats.push(f(&BlochPoint::sample_uniform(&mut rng))?);
            }
            Ok(stats)
        })
        .collect::<Result<_>>()?;
    Ok(parts
        .into_iter()
        .fold(RunningStats::default(), RunningStats::merge))
}

/// Monte Carlo estimate of the average of `⟨ψ|ρ_out|ψ⟩`.
pub fn monte_carlo_favg<S: Real>(
    phi: ConditionalPhase<S>,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    let channel = Channel::new(phi);
    let stats = sample_sphere::<S>(samples, seed, |p| {
        let psi = p.state();
        let rho = channel.output_density(&psi)?;
        Ok(state_fidelity(&psi, &rho)?.to_f64_lossy())
    })?;
    Ok(McEstimate {
        mean: stats.mean(),
        stderr: stats.std_error(),
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityReport {
    pub phi: f64,
    pub analytic: f64,
    pub quadrature: f64,
    pub monte_carlo: f64,
    pub mc_stderr: f64,
    pub samples: usize,
}

pub fn fidelity_report<S: Real>(
    phi: ConditionalPhase<S>,
    order: usize,
    samples: usize,
    seed: u64,
) -> Result<FidelityReport> {
    let mc = monte_carlo_favg(phi, samples, seed)?;
    Ok(FidelityReport {
        phi: phi.radians().to_f64_lossy(),
        analytic: analytic_favg(phi).to_f64_lossy(),
        quadrature: quadrature_favg(phi, order)?.to_f64_lossy(),
        monte_carlo: mc.mean,
        mc_stderr: mc.stderr,
        samples,
    })
}
