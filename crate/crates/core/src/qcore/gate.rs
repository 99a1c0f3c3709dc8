use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use super::{IndexSplit, QubitSet, StateVector, ALGEBRAIC_TOL, C64};
use crate::{Error, Result};

/// A `k`-qubit unitary acting on an ordered list of distinct target qubits.
/// `targets[0]` is the most significant bit of the gate's own index.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    matrix: DMatrix<C64>,
    targets: Vec<usize>,
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

impl UnitaryGate {
    pub fn new(matrix: DMatrix<C64>, targets: impl Into<Vec<usize>>) -> Result<Self> {
        let targets = targets.into();
        QubitSet::new(targets.clone())?;
        let dim = 1usize << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.nrows() });
        }
        let dev = (matrix.adjoint() * &matrix - DMatrix::<C64>::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > ALGEBRAIC_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(UnitaryGate { matrix, targets })
    }

    fn single(q: usize, entries: [C64; 4]) -> Self {
        UnitaryGate { matrix: DMatrix::from_row_slice(2, 2, &entries), targets: vec![q] }
    }

    pub fn identity(targets: impl Into<Vec<usize>>) -> Result<Self> {
        let targets = targets.into();
        let dim = 1 << targets.len();
        Self::new(DMatrix::identity(dim, dim), targets)
    }

    pub fn hadamard(q: usize) -> Self {
        let h = r(FRAC_1_SQRT_2);
        Self::single(q, [h, h, h, -h])
    }

    pub fn x(q: usize) -> Self {
        Self::single(q, [r(0.0), r(1.0), r(1.0), r(0.0)])
    }

    pub fn y(q: usize) -> Self {
        let i = C64::new(0.0, 1.0);
        Self::single(q, [r(0.0), -i, i, r(0.0)])
    }

    pub fn z(q: usize) -> Self {
        Self::single(q, [r(1.0), r(0.0), r(0.0), r(-1.0)])
    }

    /// Controlled-NOT; the control is the first target.
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        let mut m = DMatrix::zeros(4, 4);
        for (row, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            m[(row, col)] = r(1.0);
        }
        Self::new(m, vec![control, target])
    }

    pub fn swap(a: usize, b: usize) -> Result<Self> {
        let mut m = DMatrix::zeros(4, 4);
        for (row, col) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            m[(row, col)] = r(1.0);
        }
        Self::new(m, vec![a, b])
    }

    /// Diagonal gate with the given phases on the target register.
    pub fn diagonal(phases: &[C64], targets: impl Into<Vec<usize>>) -> Result<Self> {
        let targets = targets.into();
        let dim = 1usize << targets.len();
        if phases.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: phases.len() });
        }
        let mut m = DMatrix::zeros(dim, dim);
        for (i, p) in phases.iter().enumerate() {
            m[(i, i)] = *p;
        }
        Self::new(m, targets)
    }

    /// Multiply-controlled phase flip: `|1...1> -> -|1...1>` on the targets,
    /// every other ket fixed. Two targets give CZ.
    pub fn controlled_phase(targets: impl Into<Vec<usize>>) -> Result<Self> {
        let targets = targets.into();
        if targets.is_empty() {
            return Err(Error::EmptyQubitSet);
        }
        let dim = 1usize << targets.len();
        let mut phases = vec![r(1.0); dim];
        phases[dim - 1] = r(-1.0);
        Self::diagonal(&phases, targets)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn dagger(&self) -> UnitaryGate {
        UnitaryGate { matrix: self.matrix.adjoint(), targets: self.targets.clone() }
    }

    /// Same matrix on different targets.
    pub fn retarget(&self, targets: impl Into<Vec<usize>>) -> Result<UnitaryGate> {
        Self::new(self.matrix.clone(), targets)
    }

    pub(crate) fn check_fits(&self, num_qubits: usize) -> Result<()> {
        QubitSet::new(self.targets.clone())?.check(num_qubits)
    }

    /// Applies the gate to every column of `m`, viewed as `num_qubits`-qubit
    /// vectors.
    pub(crate) fn apply_columns(&self, m: &mut DMatrix<C64>, num_qubits: usize) {
        let split = IndexSplit::new(num_qubits, &self.targets);
        let k = 1usize << split.sub_len();
        let mut buf = vec![C64::new(0.0, 0.0); k];
        for col in 0..m.ncols() {
            for rest in 0..1usize << split.rest_len() {
                for (s, b) in buf.iter_mut().enumerate() {
                    *b = m[(split.join(s, rest), col)];
                }
                for row in 0..k {
                    let mut acc = C64::new(0.0, 0.0);
                    for (s, b) in buf.iter().enumerate() {
                        acc += self.matrix[(row, s)] * b;
                    }
                    m[(split.join(row, rest), col)] = acc;
                }
            }
        }
    }
}

/// `U|psi>` with `U` embedded on its targets.
pub fn apply_unitary(state: &StateVector, gate: &UnitaryGate) -> Result<StateVector> {
    let n = state.num_qubits();
    gate.check_fits(n)?;
    let mut m = DMatrix::from_column_slice(state.dim(), 1, state.amplitudes());
    gate.apply_columns(&mut m, n);
    Ok(StateVector::from_raw(n, m.iter().copied().collect()))
}
