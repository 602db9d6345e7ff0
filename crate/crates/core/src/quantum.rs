//! Polarization qubits: states, gates, and the disentangler circuit.
//!
//! Each spatial mode carries one photon whose polarization is a qubit with
//! basis `|H⟩ = (1, 0)`, `|V⟩ = (0, 1)`. Multi-mode states use the tensor
//! product with mode 1 in the most significant slot, so two modes are
//! ordered `HH, HV, VH, VV`. Mode numbers are 1-based to match the usual
//! physical labels.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{inner, kron, matmul, norm, Matrix};
use crate::scalar::Real;

#[derive(Clone, PartialEq)]
pub struct State<S: Real = f64> {
    num_modes: usize,
    amplitudes: Vec<Complex<S>>,
}

impl<S: Real> State<S> {
    /// Wraps normalized amplitudes; rejects wrong lengths and unnormalized input.
    pub fn new(num_modes: usize, amplitudes: Vec<Complex<S>>) -> Result<Self> {
        let state = Self::unchecked(num_modes, amplitudes)?;
        let n = norm(&state.amplitudes);
        if (n - S::one()).abs() > S::check_tol() {
            return Err(Error::NotNormalized {
                norm: n.to_f64_lossy(),
            });
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(num_modes: usize, amplitudes: Vec<Complex<S>>) -> Result<Self> {
        let mut state = Self::unchecked(num_modes, amplitudes)?;
        let n = norm(&state.amplitudes);
        if n == S::zero() || !n.is_finite() {
            return Err(Error::NotNormalized {
                norm: n.to_f64_lossy(),
            });
        }
        state.amplitudes.iter_mut().for_each(|z| *z = *z / n);
        Ok(state)
    }

    fn unchecked(num_modes: usize, amplitudes: Vec<Complex<S>>) -> Result<Self> {
        if num_modes == 0 || num_modes > 16 || amplitudes.len() != 1 << num_modes {
            return Err(Error::StateLength {
                len: amplitudes.len(),
                modes: num_modes,
            });
        }
        Ok(Self {
            num_modes,
            amplitudes,
        })
    }

    /// Computational basis state; `index` in the lexicographic H < V ordering.
    pub fn basis(num_modes: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex::zero(); 1 << num_modes];
        amplitudes[index] = Complex::one();
        Self {
            num_modes,
            amplitudes,
        }
    }

    pub fn h() -> Self {
        Self::basis(1, 0)
    }

    pub fn v() -> Self {
        Self::basis(1, 1)
    }

    /// `α|H⟩ + β|V⟩`, renormalized.
    pub fn qubit(alpha: Complex<S>, beta: Complex<S>) -> Result<Self> {
        Self::normalized(1, vec![alpha, beta])
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn amplitudes(&self) -> &[Complex<S>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<S>> {
        self.amplitudes
    }

    pub fn norm(&self) -> S {
        norm(&self.amplitudes)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let a = Matrix::column(&self.amplitudes);
        let b = Matrix::column(&other.amplitudes);
        Self {
            num_modes: self.num_modes + other.num_modes,
            amplitudes: kron(&a, &b).col(0),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<S> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> S {
        self.inner(other).norm_sqr()
    }

    /// The density matrix `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> Matrix<S> {
        let col = Matrix::column(&self.amplitudes);
        matmul(&col, &col.adjoint()).expect("column times row")
    }
}

impl<S: Real> fmt::Debug for State<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("State")
            .field("num_modes", &self.num_modes)
            .field("amplitudes", &self.amplitudes)
            .finish()
    }
}

#[derive(Clone, PartialEq)]
pub struct Gate<S: Real = f64> {
    num_modes: usize,
    matrix: Matrix<S>,
    label: String,
}

impl<S: Real> Gate<S> {
    pub fn new(num_modes: usize, matrix: Matrix<S>, label: impl Into<String>) -> Result<Self> {
        let dim = 1usize << num_modes;
        if matrix.shape() != (dim, dim) {
            return Err(Error::BadShape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                len: dim * dim,
            });
        }
        let deviation = matrix.unitary_deviation();
        if deviation > S::check_tol() {
            return Err(Error::NotUnitary {
                deviation: deviation.to_f64_lossy(),
            });
        }
        Ok(Self {
            num_modes,
            matrix,
            label: label.into(),
        })
    }

    pub fn identity(num_modes: usize) -> Self {
        Self {
            num_modes,
            matrix: Matrix::identity(1 << num_modes),
            label: "I".into(),
        }
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn adjoint(&self) -> Self {
        Self {
            num_modes: self.num_modes,
            matrix: self.matrix.adjoint(),
            label: format!("{}†", self.label),
        }
    }

    /// `self · rhs`: `rhs` acts first.
    pub fn then_after(&self, rhs: &Self) -> Result<Self> {
        if self.num_modes != rhs.num_modes {
            return Err(Error::DimensionMismatch {
                op: "compose",
                left: self.matrix.shape(),
                right: rhs.matrix.shape(),
            });
        }
        Ok(Self {
            num_modes: self.num_modes,
            matrix: matmul(&self.matrix, &rhs.matrix)?,
            label: format!("{}·{}", self.label, rhs.label),
        })
    }

    /// Tensor product; `self` occupies the lower-numbered modes.
    pub fn tensor(&self, rhs: &Self) -> Self {
        Self {
            num_modes: self.num_modes + rhs.num_modes,
            matrix: kron(&self.matrix, &rhs.matrix),
            label: format!("{}⊗{}", self.label, rhs.label),
        }
    }
}

impl<S: Real> fmt::Debug for Gate<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Gate({}, {} modes) {:?}",
            self.label, self.num_modes, self.matrix
        )
    }
}

/// Conditional phase of the phase gate, kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ConditionalPhase<S: Real = f64>(S);

impl<S: Real> ConditionalPhase<S> {
    pub fn new(radians: S) -> Self {
        let tau = S::TAU();
        let mut r = radians % tau;
        if r < S::zero() {
            r = r + tau;
        }
        if r >= tau {
            r = S::zero();
        }
        Self(r)
    }

    pub fn from_degrees(degrees: S) -> Self {
        Self::new(degrees.to_radians())
    }

    pub fn pi() -> Self {
        Self(S::PI())
    }

    pub fn radians(self) -> S {
        self.0
    }
}

/// Cross-Kerr coupling `χ` (angular frequency) and interaction time `t_int`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrParameters<S: Real = f64> {
    chi: S,
    t_int: S,
}

impl<S: Real> KerrParameters<S> {
    pub fn new(chi: S, t_int: S) -> Result<Self> {
        if !(chi.is_finite() && chi >= S::zero()) {
            return Err(Error::InvalidParameter(format!(
                "chi must be finite and >= 0, got {chi}"
            )));
        }
        if !(t_int.is_finite() && t_int >= S::zero()) {
            return Err(Error::InvalidParameter(format!(
                "t_int must be finite and >= 0, got {t_int}"
            )));
        }
        Ok(Self { chi, t_int })
    }

    pub fn chi(&self) -> S {
        self.chi
    }

    pub fn t_int(&self) -> S {
        self.t_int
    }
}

/// The conditional phase accumulated in the Kerr medium, `φ = χ·t_int (mod 2π)`.
pub fn kerr_phase<S: Real>(params: &KerrParameters<S>) -> ConditionalPhase<S> {
    ConditionalPhase::new(params.chi * params.t_int)
}

/// `a†_{V1} a_{V1} a†_{V2} a_{V2}` on the single-photon two-mode polarization space,
/// in units of `ħχ`: the projector onto `|V₁,V₂⟩`.
pub fn kerr_generator<S: Real>() -> Matrix<S> {
    let z = Complex::zero();
    Matrix::diag(&[z, z, z, Complex::one()])
}

/// Evolution under the cross-Kerr coupling for `t_int`, with the conditional
/// phase entering as `exp(+iφ)` on `|V₁,V₂⟩`.
pub fn kerr_evolution<S: Real>(params: &KerrParameters<S>) -> Gate<S> {
    let generator = kerr_generator::<S>();
    let phase = kerr_phase(params).radians();
    let diag: Vec<_> = (0..4)
        .map(|k| Complex::from_polar(S::one(), phase * generator[(k, k)].re))
        .collect();
    Gate {
        num_modes: 2,
        matrix: Matrix::diag(&diag),
        label: "K".into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiPlus,
        BellKind::PsiMinus,
        BellKind::PhiPlus,
        BellKind::PhiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bell states as written for type-II down-conversion pairs:
/// `ψ± = (|V₁H₂⟩ ± |H₁V₂⟩)/√2`, `φ± = (|V₁V₂⟩ ± |H₁H₂⟩)/√2`.
pub fn bell_state<S: Real>(kind: BellKind) -> State<S> {
    let h = S::FRAC_1_SQRT_2();
    let z = S::zero();
    let amps = match kind {
        BellKind::PsiPlus => [z, h, h, z],
        BellKind::PsiMinus => [z, -h, h, z],
        BellKind::PhiPlus => [h, z, z, h],
        BellKind::PhiMinus => [-h, z, z, h],
    };
    State {
        num_modes: 2,
        amplitudes: amps.iter().map(|&x| Complex::new(x, S::zero())).collect(),
    }
}

/// Single-mode polarization rotation by π/4: `|H⟩ → (|H⟩+|V⟩)/√2`, `|V⟩ → (|V⟩−|H⟩)/√2`.
pub fn rotator<S: Real>() -> Gate<S> {
    let h = S::FRAC_1_SQRT_2();
    Gate {
        num_modes: 1,
        matrix: Matrix::from_real_rows(&[[h, -h], [h, h]]),
        label: "R".into(),
    }
}

/// The π/4 rotator on mode `mode` (1 or 2) of a two-mode register.
pub fn rotator_on<S: Real>(mode: usize) -> Result<Gate<S>> {
    let r = rotator::<S>();
    let id = Gate::identity(1);
    let mut g = match mode {
        1 => r.tensor(&id),
        2 => id.tensor(&r),
        _ => {
            return Err(Error::ModeIndex {
                modes: vec![mode],
                available: 2,
            })
        }
    };
    g.label = format!("R{mode}");
    Ok(g)
}

/// Quantum phase gate `P(φ) = diag(1, 1, 1, e^{iφ})` in the `HH, HV, VH, VV` basis.
pub fn qpg<S: Real>(phi: ConditionalPhase<S>) -> Gate<S> {
    let one = Complex::one();
    Gate {
        num_modes: 2,
        matrix: Matrix::diag(&[one, one, one, Complex::from_polar(S::one(), phi.radians())]),
        label: "P".into(),
    }
}

/// `R₁† · R₂ · P(φ) · R₂†`, the left half of the Bell analyzer.
pub fn disentangler<S: Real>(phi: ConditionalPhase<S>) -> Gate<S> {
    let r1 = rotator_on::<S>(1).expect("mode 1");
    let r2 = rotator_on::<S>(2).expect("mode 2");
    let d = r1
        .adjoint()
        .then_after(&r2)
        .and_then(|g| g.then_after(&qpg(phi)))
        .and_then(|g| g.then_after(&r2.adjoint()))
        .expect("two-mode gates compose");
    Gate {
        label: "D".into(),
        ..d
    }
}

/// Applies `gate` to the listed (1-based) modes of `state`, identity elsewhere.
/// The first listed mode is the gate's most significant qubit.
pub fn apply_gate<S: Real>(gate: &Gate<S>, state: &State<S>, modes: &[usize]) -> Result<State<S>> {
    if gate.num_modes != modes.len() {
        return Err(Error::GateArity {
            gate: gate.num_modes,
            given: modes.len(),
        });
    }
    let n = state.num_modes;
    let mut seen = 0usize;
    for &m in modes {
        if m == 0 || m > n || seen & (1 << m) != 0 {
            return Err(Error::ModeIndex {
                modes: modes.to_vec(),
                available: n,
            });
        }
        seen |= 1 << m;
    }
    // Bit position (from the least significant end) for each target mode.
    let shifts: Vec<usize> = modes.iter().map(|&m| n - m).collect();
    let mask: usize = shifts.iter().map(|&s| 1 << s).sum();
    let k = modes.len();
    let gdim = 1 << k;

    let spread = |sub: usize| -> usize {
        shifts
            .iter()
            .enumerate()
            .filter(|(pos, _)| sub & (1 << (k - 1 - pos)) != 0)
            .map(|(_, &s)| 1 << s)
            .sum()
    };
    let gather = |idx: usize| -> usize {
        shifts
            .iter()
            .enumerate()
            .filter(|(_, &s)| idx & (1 << s) != 0)
            .map(|(pos, _)| 1 << (k - 1 - pos))
            .sum()
    };

    let mut out = vec![Complex::zero(); state.amplitudes.len()];
    for (idx, &amp) in state.amplitudes.iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let col = gather(idx);
        let rest = idx & !mask;
        for row in 0..gdim {
            let g = gate.matrix[(row, col)];
            if !g.is_zero() {
                out[rest | spread(row)] = out[rest | spread(row)] + g * amp;
            }
        }
    }
    Ok(State {
        num_modes: n,
        amplitudes: out,
    })
}
