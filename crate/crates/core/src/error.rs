use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {left:?}, right is {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (max |U^H U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("operator has negative eigenvalue {eigenvalue:e}")]
    NegativeOperator { eigenvalue: f64 },
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid state length {len} for {modes} modes")]
    StateLength { len: usize, modes: usize },
    #[error("invalid mode selection {modes:?} for a {available}-mode state")]
    ModeIndex { modes: Vec<usize>, available: usize },
    #[error("gate acts on {gate} modes but {given} were named")]
    GateArity { gate: usize, given: usize },
    #[error("no Bell state can be inferred without a detector output")]
    NotClassifiable,
    #[error("expectation value has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
