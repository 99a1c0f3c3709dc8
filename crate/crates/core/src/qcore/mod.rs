//! Dense linear-algebra substrate.
//!
//! Everything here is a pure function of its inputs. Tolerances follow one
//! scheme throughout: `1e-12` for algebraic identities, `1e-10` for
//! probabilities and orthonormality, `1e-9` for eigen-solves.

mod density;
mod gate;
mod linalg;
mod measure;
mod pauli;
mod qubits;
mod state;

pub use density::{
    apply_channel_to_density, partial_trace, partial_trace_pure, partial_transpose,
    DensityMatrix,
};
pub use gate::{apply_unitary, UnitaryGate};
pub use linalg::{hermitian_eigen, hermitian_eigenvalues, hermiticity_deviation};
pub use measure::{computational_basis, measure_in_basis, MeasureMode, MeasurementOutcome};
pub use pauli::{Pauli, PauliString};
pub use qubits::QubitSet;
pub use state::{fidelity, StateFile, StateVector, STATE_CONVENTION};

pub(crate) use measure::normalize_residual;
pub(crate) use qubits::IndexSplit;

pub type C64 = num_complex::Complex64;

/// Largest system the dense representation accepts.
pub const MAX_QUBITS: usize = 12;

/// Tolerance for algebraic identities (norms, unitarity, Hermiticity).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for probabilities and orthonormality.
pub const PROBABILITY_TOL: f64 = 1e-10;
/// Tolerance for eigen-solve residuals and "zero" eigenvalues.
pub const EIGEN_TOL: f64 = 1e-9;
/// Outcomes below this probability are dropped from enumerations.
pub const ZERO_PROBABILITY: f64 = 1e-14;

pub(crate) fn check_qubit_count(num_qubits: usize) -> crate::Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(crate::Error::TooManyQubits { num_qubits, max: MAX_QUBITS });
    }
    Ok(())
}
