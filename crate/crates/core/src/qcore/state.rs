use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{check_qubit_count, DensityMatrix, IndexSplit, QubitSet, ALGEBRAIC_TOL, C64};
use crate::{Error, Result};

/// Value of the `convention` field in state files.
pub const STATE_CONVENTION: &str = "q1-most-significant";

/// Normalized pure state of `num_qubits` qubits.
///
/// Qubit 1 is the leftmost tensor factor, i.e. the most significant bit of
/// the amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps `amplitudes`, which must have length `2^num_qubits` and unit norm
    /// within `1e-12`.
    pub fn new(num_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let expected = 1usize << num_qubits;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: amplitudes.len() });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(num_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let expected = 1usize << num_qubits;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: amplitudes.len() });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Real amplitudes, rescaled to unit norm.
    pub fn from_real(num_qubits: usize, amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(num_qubits, amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub(crate) fn from_raw(num_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_qubits);
        StateVector { num_qubits, amplitudes }
    }

    /// Computational basis ket `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, limit: dim });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// `|+>^n`, the uniform superposition.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(StateVector { num_qubits, amplitudes: vec![a; dim] })
    }

    /// Haar-random state drawn from complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let amplitudes = (0..1usize << num_qubits)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(num_qubits, amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_qubit_count(n)?;
        let mut amplitudes = Vec::with_capacity(1 << n);
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(StateVector { num_qubits: n, amplitudes })
    }

    /// `|self><self|`.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reorders qubits: qubit `k` of the result is qubit `order[k-1]` of
    /// `self`. `order` must be a permutation of `1..=n`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<StateVector> {
        let n = self.num_qubits;
        if order.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: order.len() });
        }
        let set = QubitSet::new(order.to_vec())?;
        set.check(n)?;
        let split = IndexSplit::new(n, order);
        let amplitudes = (0..self.dim()).map(|new| self.amplitudes[split.join(new, 0)]).collect();
        Ok(StateVector { num_qubits: n, amplitudes })
    }

    /// Largest componentwise distance to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            num_qubits: self.num_qubits,
            convention: STATE_CONVENTION.to_string(),
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        file.into_state()
    }
}

impl fmt::Display for StateVector {
    /// Ket expansion, skipping amplitudes below `1e-12`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < ALGEBRAIC_TOL {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if a.im.abs() < ALGEBRAIC_TOL {
                write!(f, "{:.6}", a.re)?;
            } else {
                write!(f, "({:.6}{:+.6}i)", a.re, a.im)?;
            }
            write!(f, "|{:0width$b}>", i, width = self.num_qubits.max(1))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// On-disk state format shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub num_qubits: usize,
    pub convention: String,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn into_state(self) -> Result<StateVector> {
        if self.convention != STATE_CONVENTION {
            return Err(Error::InvalidArgument(format!(
                "unsupported convention '{}', expected '{STATE_CONVENTION}'",
                self.convention
            )));
        }
        let amplitudes = self.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect();
        StateVector::new(self.num_qubits, amplitudes)
    }
}

/// `|<a|b>|^2`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}
