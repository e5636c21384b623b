//! Dense complex linear algebra sized for small multi-qubit systems.
//!
//! Everything here targets dimensions up to 2^7 (six data qubits plus one
//! ancilla) and favours exactness over speed: determinants come from direct
//! formulas or partially pivoted elimination, singular values from cyclic
//! Jacobi iteration on the Hermitian product, and unitary completions from
//! matrix square roots of that decomposition. All values are immutable after
//! construction and every operation is a pure function.

mod eigen;
mod matrix;
mod state;

pub use eigen::{dilation_unitary, hermitian_eigen, inverse, singular_values};
pub use matrix::{determinant, is_unitary, kron, unitarity_defect, Matrix};
pub use state::{partial_inner, StateVector};

pub use num_complex::Complex64;

/// Shorthand complex constructor.
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Centralised numeric tolerances.
///
/// Inputs throughout the crate are O(1) amplitudes, so double precision
/// leaves at least six digits of headroom over the loosest of these.
pub mod tol {
    /// Algebraic identities: unitarity checks, inverses, reconstruction.
    pub const ALGEBRAIC: f64 = 1e-9;
    /// Smallest singular value below which a matrix counts as singular.
    pub const SINGULARITY: f64 = 1e-10;
    /// Off-diagonal norm at which Jacobi iteration stops.
    pub const JACOBI_OFF: f64 = 1e-14;
}

/// Errors from constructors and numeric routines in this module.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QmathError {
    #[error("{found} entries do not fill a {rows}x{cols} matrix")]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("non-finite component at position {index}")]
    NonFinite { index: usize },
    #[error("duplicate qubit label {label}")]
    DuplicateLabel { label: u8 },
    #[error("{found} amplitudes do not span {qubits} qubits")]
    AmplitudeCount { qubits: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("labels {missing:?} are not part of the target state")]
    LabelMismatch { missing: Vec<u8> },
    #[error("label sets of the two states differ")]
    LabelSetMismatch,
    #[error("tensor factors share qubit labels")]
    OverlappingLabels,
    #[error("matrix is singular (smallest singular value {s_min:.3e})")]
    SingularMatrix { s_min: f64 },
    #[error("operator norm {s_max} exceeds 1")]
    NormExceeded { s_max: f64 },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("cannot normalize a zero vector")]
    ZeroNorm,
}
