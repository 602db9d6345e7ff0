//! The teleportation protocol for an arbitrary conditional phase.
//!
//! Alice holds the unknown photon (mode 1) and half of `|ψ⁺⟩₂₃`; Bob holds
//! mode 3. Running the disentangler on modes 1 and 2 and expanding in the
//! factorized basis gives
//!
//! ```text
//! (D(φ) ⊗ I) |ψ⟩₁|ψ⁺⟩₂₃ = Σᵢ |eᵢ⟩₁₂ ⊗ Gᵢ(φ)|ψ⟩₃
//! ```
//!
//! The branch operators `Gᵢ` are read off that simulation rather than typed
//! in. Bob's correction for outcome `i` is the inverse of the unitary polar
//! factor of `Gᵢ`, which leaves the positive factor `Rᵢ = sqrt(Gᵢ^H Gᵢ)` as
//! the net action on his qubit.

use num_complex::Complex;
use rand::Rng;

use crate::bell::{detect, sample_index, DetectorBank, Factorized, MeasurementOutcome};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, matmul, polar_decompose, Matrix};
use crate::quantum::{apply_gate, bell_state, disentangler, BellKind, ConditionalPhase, State};
use crate::scalar::Real;

/// Branch operator `Gᵢ(φ)` on Bob's qubit for Alice's outcome `eᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOperator<S: Real = f64> {
    pub outcome: Factorized,
    pub phi: ConditionalPhase<S>,
    pub matrix: Matrix<S>,
}

impl<S: Real> MeasurementOperator<S> {
    pub fn index(&self) -> usize {
        self.outcome.index()
    }
}

/// Bob's correction `Uᵢ(φ)` for outcome `eᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionUnitary<S: Real = f64> {
    pub outcome: Factorized,
    pub phi: ConditionalPhase<S>,
    pub matrix: Matrix<S>,
}

impl<S: Real> CorrectionUnitary<S> {
    pub fn index(&self) -> usize {
        self.outcome.index()
    }
}

/// A valid single-qubit density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Density<S: Real = f64> {
    matrix: Matrix<S>,
}

impl<S: Real> Density<S> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let eig = hermitian_eig(&matrix)?;
        let trace = matrix.trace();
        if (trace.re - S::one()).abs() > S::check_tol() || trace.im.abs() > S::check_tol() {
            return Err(Error::InvalidParameter(format!(
                "density operator trace is {trace}, expected 1"
            )));
        }
        if let Some(&min) = eig.values.last() {
            if min < -S::check_tol() {
                return Err(Error::NegativeOperator {
                    eigenvalue: min.to_f64_lossy(),
                });
            }
        }
        Ok(Self { matrix })
    }

    pub fn pure(state: &State<S>) -> Self {
        Self {
            matrix: state.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: Matrix::identity(dim).scale_real(S::one() / S::lit(dim as f64)),
        }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex<S> {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> Vec<S> {
        hermitian_eig(&self.matrix)
            .expect("validated Hermitian")
            .values
    }
}

/// `⟨ψ|ρ|ψ⟩`, clamped into `[0, 1]` after checking the imaginary residue.
pub fn state_fidelity<S: Real>(input: &State<S>, rho: &Density<S>) -> Result<S> {
    let v = rho.matrix.apply(input.amplitudes())?;
    let z = crate::linalg::inner(input.amplitudes(), &v);
    let tol = S::lit(1e-12).max(S::epsilon() * S::lit(64.0));
    if z.im.abs() > tol {
        return Err(Error::ImaginaryResidue {
            residue: z.im.to_f64_lossy(),
        });
    }
    Ok(z.re.max(S::zero()).min(S::one()))
}

/// Simulates the three-photon circuit on `|H⟩` and `|V⟩` inputs and reads the
/// columns of each `Gᵢ` from the amplitudes of `|eᵢ⟩₁₂`.
pub fn derive_measurement_operators<S: Real>(
    phi: ConditionalPhase<S>,
) -> [MeasurementOperator<S>; 4] {
    let d = disentangler(phi);
    let resource = bell_state::<S>(BellKind::PsiPlus);
    let outputs: Vec<State<S>> = [State::h(), State::v()]
        .iter()
        .map(|input| {
            apply_gate(&d, &input.tensor(&resource), &[1, 2]).expect("three-mode embedding")
        })
        .collect();
    Factorized::ALL.map(|e| {
        let i = e.slot();
        let mut m = Matrix::zeros(2, 2);
        for (col, out) in outputs.iter().enumerate() {
            m[(0, col)] = out.amplitudes()[2 * i];
            m[(1, col)] = out.amplitudes()[2 * i + 1];
        }
        MeasurementOperator {
            outcome: e,
            phi,
            matrix: m,
        }
    })
}

/// `Uᵢ = Tᵢ⁻¹ = Tᵢ^H` where `Gᵢ = Tᵢ Rᵢ` is the polar decomposition.
pub fn optimal_corrections<S: Real>(phi: ConditionalPhase<S>) -> [CorrectionUnitary<S>; 4] {
    Channel::new(phi).corrections
}

/// Precomputed branch operators, corrections and polar factors for one `φ`.
#[derive(Debug, Clone)]
pub struct Channel<S: Real = f64> {
    phi: ConditionalPhase<S>,
    operators: [MeasurementOperator<S>; 4],
    corrections: [CorrectionUnitary<S>; 4],
    positives: [Matrix<S>; 4],
    corrected: [Matrix<S>; 4],
}

impl<S: Real> Channel<S> {
    pub fn new(phi: ConditionalPhase<S>) -> Self {
        let operators = derive_measurement_operators(phi);
        let polars = operators
            .clone()
            .map(|g| polar_decompose(&g.matrix).expect("2x2 polar decomposition"));
        let corrections = Factorized::ALL.map(|e| CorrectionUnitary {
            outcome: e,
            phi,
            matrix: polars[e.slot()].unitary.adjoint(),
        });
        let positives = polars.map(|p| p.positive);
        let corrected = Factorized::ALL.map(|e| {
            matmul(&corrections[e.slot()].matrix, &operators[e.slot()].matrix).expect("2x2 product")
        });
        Self {
            phi,
            operators,
            corrections,
            positives,
            corrected,
        }
    }

    pub fn phi(&self) -> ConditionalPhase<S> {
        self.phi
    }

    pub fn operators(&self) -> &[MeasurementOperator<S>; 4] {
        &self.operators
    }

    pub fn corrections(&self) -> &[CorrectionUnitary<S>; 4] {
        &self.corrections
    }

    /// Positive polar factors `Rᵢ = sqrt(Gᵢ^H Gᵢ)`.
    pub fn positive_factors(&self) -> &[Matrix<S>; 4] {
        &self.positives
    }

    /// `‖Gᵢ|ψ⟩‖²` for each outcome.
    pub fn branch_probabilities(&self, input: &State<S>) -> Result<[S; 4]> {
        check_qubit(input)?;
        let mut p = [S::zero(); 4];
        for (slot, g) in self.operators.iter().enumerate() {
            p[slot] = g
                .matrix
                .apply(input.amplitudes())?
                .iter()
                .map(|z| z.norm_sqr())
                .sum();
        }
        Ok(p)
    }

    /// `ρ_out = Σᵢ Uᵢ Gᵢ |ψ⟩⟨ψ| Gᵢ^H Uᵢ^H` over all outcomes.
    pub fn output_density(&self, input: &State<S>) -> Result<Density<S>> {
        check_qubit(input)?;
        let projector = input.projector();
        let mut rho = Matrix::zeros(2, 2);
        for k in &self.corrected {
            let term = matmul(&matmul(k, &projector)?, &k.adjoint())?;
            rho = rho.add(&term)?;
        }
        Density::new(rho)
    }

    /// `Σᵢ |⟨ψ|Rᵢ|ψ⟩|²`, equal to `⟨ψ|ρ_out|ψ⟩` with optimal corrections.
    pub fn fidelity_from_positive_factors(&self, input: &State<S>) -> S {
        let a = input.amplitudes();
        self.positives
            .iter()
            .map(|r| {
                let rv = r.apply(a).expect("2x2 times qubit");
                crate::linalg::inner(a, &rv).norm_sqr()
            })
            .sum()
    }

    pub fn teleport_once<R: Rng + ?Sized>(
        &self,
        input: &State<S>,
        bank: &DetectorBank<S>,
        rng: &mut R,
    ) -> Result<TeleportOutcome<S>> {
        let weights = self.branch_probabilities(input)?;
        let total: S = weights.iter().copied().sum();
        if (total - S::one()).abs() > S::check_tol() {
            return Err(Error::NotNormalized {
                norm: total.sqrt().to_f64_lossy(),
            });
        }
        let branch = Factorized::ALL[sample_index(&weights, rng)];
        let outcome = detect(MeasurementOutcome::Detected(branch), bank, rng);
        let bob_state = match outcome {
            MeasurementOutcome::Detected(e) => {
                let out = self.corrected[e.slot()].apply(input.amplitudes())?;
                Some(State::normalized(1, out)?)
            }
            MeasurementOutcome::NoOutput => None,
        };
        Ok(TeleportOutcome {
            branch,
            outcome,
            bob_state,
        })
    }
}

fn check_qubit<S: Real>(input: &State<S>) -> Result<()> {
    if input.num_modes() != 1 {
        return Err(Error::StateLength {
            len: input.amplitudes().len(),
            modes: 1,
        });
    }
    Ok(())
}

/// Result of a single protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome<S: Real = f64> {
    /// Factorized state the photons were projected onto.
    pub branch: Factorized,
    /// What the detectors reported.
    pub outcome: MeasurementOutcome,
    /// Bob's corrected qubit, present only when the analyzer answered.
    pub bob_state: Option<State<S>>,
}

pub fn teleport_once<S: Real, R: Rng + ?Sized>(
    input: &State<S>,
    phi: ConditionalPhase<S>,
    bank: &DetectorBank<S>,
    rng: &mut R,
) -> Result<TeleportOutcome<S>> {
    Channel::new(phi).teleport_once(input, bank, rng)
}

pub fn output_density<S: Real>(input: &State<S>, phi: ConditionalPhase<S>) -> Result<Density<S>> {
    Channel::new(phi).output_density(input)
}
