//! Real scalar abstraction shared by every numeric routine in the crate.
//!
//! All math is written against [`Real`] so the same code runs in `f64`
//! (the default, used by the CLI) and `f32`. Structural tolerances scale
//! with the precision of the type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable as the real part of amplitudes.
pub trait Real:
    Float + FloatConst + FromPrimitive + Default + Debug + Display + Sum + Send + Sync + 'static
{
    /// Tolerance for Hermitian / unitary / normalization checks.
    const CHECK_TOL: f64;
    /// Window below zero inside which eigenvalues are clamped before a square root.
    const CLAMP_TOL: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn check_tol() -> Self {
        Self::lit(Self::CHECK_TOL)
    }

    #[inline]
    fn clamp_tol() -> Self {
        Self::lit(Self::CLAMP_TOL)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const CHECK_TOL: f64 = 1e-10;
    const CLAMP_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const CHECK_TOL: f64 = 1e-4;
    const CLAMP_TOL: f64 = 1e-5;
}
