use std::fmt;

use serde::{Deserialize, Serialize};

use super::{apply_unitary, QubitSet, StateVector, UnitaryGate};
use crate::{Error, Result};

/// Single-qubit Pauli operator.
///
/// The two-bit code used to index words is `I=00, X=01, Z=10, Y=11`, so a
/// message bit pair `(b1, b2)` selects `X^b2 Z^b1` up to phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn code(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Z => 2,
            Pauli::Y => 3,
        }
    }

    pub fn from_code(code: usize) -> Pauli {
        match code & 3 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Z,
            _ => Pauli::Y,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn gate(self, qubit: usize) -> Option<UnitaryGate> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(UnitaryGate::x(qubit)),
            Pauli::Y => Some(UnitaryGate::y(qubit)),
            Pauli::Z => Some(UnitaryGate::z(qubit)),
        }
    }
}

/// Tensor product of Paulis on an ordered list of target qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    ops: Vec<Pauli>,
    targets: Vec<usize>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>, targets: Vec<usize>) -> Result<Self> {
        if ops.len() != targets.len() {
            return Err(Error::DimensionMismatch { expected: targets.len(), got: ops.len() });
        }
        QubitSet::new(targets.clone())?;
        Ok(PauliString { ops, targets })
    }

    /// Word number `index` on `targets`; the first target holds the most
    /// significant base-4 digit.
    pub fn from_index(index: usize, targets: &[usize]) -> Result<Self> {
        let k = targets.len();
        if index >= 1 << (2 * k) {
            return Err(Error::IndexOutOfRange { index, limit: 1 << (2 * k) });
        }
        let ops = (0..k).map(|j| Pauli::from_code(index >> (2 * (k - 1 - j)))).collect();
        Self::new(ops, targets.to_vec())
    }

    /// All `4^k` words on `targets`, in index order.
    pub fn all(targets: &[usize]) -> Result<Vec<Self>> {
        (0..1usize << (2 * targets.len())).map(|i| Self::from_index(i, targets)).collect()
    }

    pub fn identity(targets: &[usize]) -> Result<Self> {
        Self::new(vec![Pauli::I; targets.len()], targets.to_vec())
    }

    /// Parses `"XIZ"` onto `targets`.
    pub fn parse(word: &str, targets: &[usize]) -> Result<Self> {
        let ops = word
            .chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidArgument(format!("not a Pauli symbol: '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops, targets.to_vec())
    }

    pub fn index(&self) -> usize {
        self.ops.iter().fold(0, |acc, p| (acc << 2) | p.code())
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|p| **p != Pauli::I).count()
    }

    /// Two classical bits per target, most significant first.
    pub fn bits(&self) -> String {
        self.ops.iter().map(|p| format!("{:02b}", p.code())).collect()
    }

    pub fn label(&self) -> String {
        self.ops.iter().map(|p| p.symbol()).collect()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        for (p, &q) in self.ops.iter().zip(&self.targets) {
            if let Some(g) = p.gate(q) {
                out = apply_unitary(&out, &g)?;
            }
        }
        Ok(out)
    }

    /// Same word moved onto other qubits.
    pub fn retarget(&self, targets: &[usize]) -> Result<Self> {
        Self::new(self.ops.clone(), targets.to_vec())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_and_bits() {
        let targets = [1, 2, 3];
        for i in 0..64 {
            let w = PauliString::from_index(i, &targets).unwrap();
            assert_eq!(w.index(), i);
            assert_eq!(usize::from_str_radix(&w.bits(), 2).unwrap(), i);
        }
        assert_eq!(PauliString::from_index(0b01_10_11, &targets).unwrap().label(), "XZY");
        assert!(PauliString::from_index(64, &targets).is_err());
    }

    #[test]
    fn parse_and_apply() {
        let w = PauliString::parse("xz", &[2, 1]).unwrap();
        assert_eq!(w.label(), "XZ");
        let out = w.apply(&StateVector::basis(2, 0b10).unwrap()).unwrap();
        // X on qubit 2 then Z on qubit 1 (which is 1): -|11>
        assert!((out.amplitude(0b11).re + 1.0).abs() < 1e-15);
        assert!(PauliString::parse("Q", &[1]).is_err());
    }
}
