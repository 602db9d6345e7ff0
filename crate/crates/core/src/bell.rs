//! Detection half of the Bell analyzer: two polarizing beam splitters feed
//! four single-photon detectors (`H₁, V₁, H₂, V₂`). After the disentangler
//! the two photons are measured in the factorized basis
//! `e₁..e₄ = HH, HV, VH, VV`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::quantum::{BellKind, State};
use crate::scalar::Real;

/// One of the four factorized two-photon polarization states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factorized {
    HH,
    HV,
    VH,
    VV,
}

impl Factorized {
    pub const ALL: [Factorized; 4] = [
        Factorized::HH,
        Factorized::HV,
        Factorized::VH,
        Factorized::VV,
    ];

    /// 1-based index `i` of `e_i`.
    pub fn index(self) -> usize {
        self.slot() + 1
    }

    /// 0-based amplitude slot in the two-mode state vector.
    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i.checked_sub(1)?).copied()
    }

    fn from_slot(slot: usize) -> Self {
        Self::ALL[slot]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementOutcome {
    Detected(Factorized),
    NoOutput,
}

impl fmt::Display for MeasurementOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementOutcome::Detected(e) => write!(f, "e{}", e.index()),
            MeasurementOutcome::NoOutput => f.write_str("no_output"),
        }
    }
}

/// Which of the four detectors fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClickPattern {
    pub h1: bool,
    pub v1: bool,
    pub h2: bool,
    pub v2: bool,
}

impl ClickPattern {
    /// Clicks when both photons of `e` are registered.
    pub fn full(e: Factorized) -> Self {
        let (v1, v2) = match e {
            Factorized::HH => (false, false),
            Factorized::HV => (false, true),
            Factorized::VH => (true, false),
            Factorized::VV => (true, true),
        };
        Self {
            h1: !v1,
            v1,
            h2: !v2,
            v2,
        }
    }

    /// Exactly one click per spatial mode yields an outcome; anything else is silent.
    pub fn outcome(self) -> MeasurementOutcome {
        let mode1 = match (self.h1, self.v1) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None,
        };
        let mode2 = match (self.h2, self.v2) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None,
        };
        match (mode1, mode2) {
            (Some(v1), Some(v2)) => MeasurementOutcome::Detected(Factorized::from_slot(
                ((v1 as usize) << 1) | v2 as usize,
            )),
            _ => MeasurementOutcome::NoOutput,
        }
    }
}

/// Four identical detectors with efficiency `eta`, no dark counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorBank<S: Real = f64> {
    eta: S,
}

impl<S: Real> DetectorBank<S> {
    pub fn new(eta: S) -> Result<Self> {
        if !(eta >= S::zero() && eta <= S::one()) {
            return Err(Error::InvalidParameter(format!(
                "detector efficiency must lie in [0, 1], got {eta}"
            )));
        }
        Ok(Self { eta })
    }

    pub fn ideal() -> Self {
        Self { eta: S::one() }
    }

    pub fn eta(&self) -> S {
        self.eta
    }

    /// Probability that the analyzer answers at all (both photons detected).
    pub fn success_probability(&self) -> S {
        self.eta * self.eta
    }

    /// Each photon is registered independently with probability `eta`.
    pub fn fire<R: Rng + ?Sized>(&self, e: Factorized, rng: &mut R) -> ClickPattern {
        let mut p = ClickPattern::full(e);
        let eta = self.eta.to_f64_lossy();
        let first = rng.random::<f64>() < eta;
        let second = rng.random::<f64>() < eta;
        p.h1 &= first;
        p.v1 &= first;
        p.h2 &= second;
        p.v2 &= second;
        p
    }
}

/// Born weights `|⟨e_i|state⟩|²` over the factorized basis.
pub fn born_weights<S: Real>(state: &State<S>) -> Result<[S; 4]> {
    if state.num_modes() != 2 {
        return Err(Error::StateLength {
            len: state.amplitudes().len(),
            modes: 2,
        });
    }
    let a = state.amplitudes();
    Ok([
        a[0].norm_sqr(),
        a[1].norm_sqr(),
        a[2].norm_sqr(),
        a[3].norm_sqr(),
    ])
}

/// Draws an index from nonnegative weights summing to about one.
pub(crate) fn sample_index<S: Real, R: Rng + ?Sized>(weights: &[S], rng: &mut R) -> usize {
    let total: f64 = weights.iter().map(|w| w.to_f64_lossy()).sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.iter().enumerate() {
        let w = w.to_f64_lossy();
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Born-rule measurement of a two-photon state in the factorized basis.
/// Returns the outcome and its probability.
pub fn project_factorized<S: Real, R: Rng + ?Sized>(
    state: &State<S>,
    rng: &mut R,
) -> Result<(Factorized, S)> {
    let weights = born_weights(state)?;
    let n = weights.iter().copied().sum::<S>();
    if (n - S::one()).abs() > S::check_tol() {
        return Err(Error::NotNormalized {
            norm: n.sqrt().to_f64_lossy(),
        });
    }
    let slot = sample_index(&weights, rng);
    Ok((Factorized::from_slot(slot), weights[slot]))
}

/// Passes the ideal outcome through the detectors: the same outcome when both
/// photons click, otherwise [`MeasurementOutcome::NoOutput`]. Never reports a
/// different basis state.
pub fn detect<S: Real, R: Rng + ?Sized>(
    outcome: MeasurementOutcome,
    bank: &DetectorBank<S>,
    rng: &mut R,
) -> MeasurementOutcome {
    match outcome {
        MeasurementOutcome::Detected(e) => bank.fire(e, rng).outcome(),
        MeasurementOutcome::NoOutput => MeasurementOutcome::NoOutput,
    }
}

/// Inverts the ideal disentangler map `ψ⁺→HV, ψ⁻→VV, φ⁺→HH, φ⁻→VH`.
pub fn classify_bell(outcome: MeasurementOutcome) -> Result<BellKind> {
    match outcome {
        MeasurementOutcome::Detected(Factorized::HV) => Ok(BellKind::PsiPlus),
        MeasurementOutcome::Detected(Factorized::VV) => Ok(BellKind::PsiMinus),
        MeasurementOutcome::Detected(Factorized::HH) => Ok(BellKind::PhiPlus),
        MeasurementOutcome::Detected(Factorized::VH) => Ok(BellKind::PhiMinus),
        MeasurementOutcome::NoOutput => Err(Error::NotClassifiable),
    }
}
