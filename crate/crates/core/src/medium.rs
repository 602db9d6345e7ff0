//! Conditional phase and two-photon absorption for a slow-light EIT Kerr
//! medium, in the limit where the pulses are compressed well inside the
//! medium. With detuning `Δ` and linewidth `γ` of the probed transition:
//!
//! ```text
//! phase       = γΔ / (4γ² + 4Δ²)
//! absorption  = γ² / (4γ² + 4Δ²)
//! phase ≈ γ / (4Δ)   for Δ ≫ γ
//! ```
//!
//! Only the ratio `Δ/γ` matters, so any common angular-frequency unit works.
//! Absorption is reported next to the fidelity, never folded into it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fidelity::analytic_favg;
use crate::quantum::ConditionalPhase;
use crate::scalar::Real;

/// Absorption above which estimates carry a warning.
pub const ABSORPTION_WARNING: f64 = 0.01;

/// Conditional phase measured between two cavity modes (16°), the reference
/// point for weak-nonlinearity operation.
pub const MEASURED_CAVITY_PHASE_DEG: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParameters<S: Real = f64> {
    gamma24: S,
    delta24: S,
}

impl<S: Real> MediumParameters<S> {
    pub fn new(gamma24: S, delta24: S) -> Result<Self> {
        if !(gamma24.is_finite() && gamma24 > S::zero()) {
            return Err(Error::InvalidParameter(format!(
                "linewidth gamma24 must be > 0, got {gamma24}"
            )));
        }
        if !delta24.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "detuning delta24 must be finite, got {delta24}"
            )));
        }
        Ok(Self { gamma24, delta24 })
    }

    pub fn gamma24(&self) -> S {
        self.gamma24
    }

    pub fn delta24(&self) -> S {
        self.delta24
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumEstimate<S: Real + Serialize = f64> {
    /// Conditional phase per photon pair, radians.
    pub phase_shift: S,
    /// Two-photon absorption probability.
    pub absorption: S,
    /// Large-detuning approximation `γ/(4Δ)`; infinite at zero detuning.
    pub large_detuning_phase: S,
}

impl<S: Real + Serialize> MediumEstimate<S> {
    pub fn absorption_warning(&self) -> bool {
        self.absorption.to_f64_lossy() > ABSORPTION_WARNING
    }
}

pub fn estimate_medium<S: Real + Serialize>(p: &MediumParameters<S>) -> MediumEstimate<S> {
    // Work in x = Δ/γ to keep the expressions homogeneous.
    let x = p.delta24 / p.gamma24;
    let four = S::lit(4.0);
    let denom = four + four * x * x;
    MediumEstimate {
        phase_shift: x / denom,
        absorption: S::one() / denom,
        large_detuning_phase: S::one() / (four * x),
    }
}

/// Average teleportation fidelity at the medium's conditional phase.
pub fn medium_to_fidelity<S: Real + Serialize>(p: &MediumParameters<S>) -> S {
    analytic_favg(ConditionalPhase::new(estimate_medium(p).phase_shift))
}

/// The measured cavity phase as a [`ConditionalPhase`].
pub fn measured_cavity_phase<S: Real>() -> ConditionalPhase<S> {
    ConditionalPhase::from_degrees(S::lit(MEASURED_CAVITY_PHASE_DEG))
}
