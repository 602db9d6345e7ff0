//! Exact simulation of polarization-qubit teleportation where Alice's Bell
//! analyzer is built from polarization rotators and a cross-Kerr quantum
//! phase gate with arbitrary conditional phase `φ`.
//!
//! The crate is generic over the real scalar ([`Real`], implemented for
//! `f64` and `f32`). The aliases below fix the scalar to `f64`, which is
//! what the command-line tool uses.

pub mod bell;
pub mod cli;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod medium;
pub mod quantum;
pub mod rng;
pub mod scalar;
pub mod teleport;

pub use error::{Error, Result};
pub use scalar::Real;

pub use bell::{
    classify_bell, detect, project_factorized, ClickPattern, DetectorBank, Factorized,
    MeasurementOutcome,
};
pub use fidelity::{
    analytic_favg, beats_classical, monte_carlo_favg, quadrature_favg, BlochPoint, FidelityReport,
    McEstimate, CLASSICAL_BOUND,
};
pub use linalg::{adjoint, hermitian_eig, hermitian_sqrt, kron, matmul, polar_decompose, Matrix};
pub use medium::{estimate_medium, medium_to_fidelity, MediumEstimate, MediumParameters};
pub use quantum::{
    apply_gate, bell_state, disentangler, kerr_phase, qpg, rotator, BellKind, ConditionalPhase,
    Gate, KerrParameters, State,
};
pub use teleport::{
    derive_measurement_operators, optimal_corrections, output_density, state_fidelity,
    teleport_once, Channel, CorrectionUnitary, Density, MeasurementOperator, TeleportOutcome,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type ComplexMatrix = Matrix<f64>;
pub type ComplexMatrix32 = Matrix<f32>;
pub type PureState = State<f64>;
pub type PureState32 = State<f32>;
pub type DensityOperator = Density<f64>;
pub type DensityOperator32 = Density<f32>;
