//! Dense simulation of 2N-qubit mirror states and the communication
//! protocols built on them.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`] - state vectors, density matrices, gates, measurement,
//!   partial trace / transpose and Hermitian spectra.
//! * [`states`] - mirror states (direct and circuit form), rearranged Bell
//!   pairs, linear cluster states and the mirror measurement basis.
//! * [`metrics`] - entropy, negativity, concurrence, rank, connectedness,
//!   error-correction alpha matrices and Holevo quantities.
//! * [`protocols`] - teleportation, superdense coding and quantum
//!   information splitting, each with a replayable transcript.
//! * [`decoherence`] - the collisional dephasing map and negativity tables.
//! * [`cli`] - the `mirrorstate` command-line front end and report bundle.
//!
//! Qubits are numbered from 1 and qubit 1 is the most significant bit of a
//! basis index, so `|i1 i2 ... in>` prints left to right.

pub mod cli;
pub mod decoherence;
pub mod error;
pub mod metrics;
pub mod protocols;
pub mod qcore;
pub mod states;

pub use error::{Error, Result};
pub use qcore::{
    DensityMatrix, MeasureMode, MeasurementOutcome, Pauli, PauliString, QubitSet, StateVector,
    UnitaryGate, C64,
};
