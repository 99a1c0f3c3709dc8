//! State constructors: mirror states (direct and circuit), rearranged Bell
//! pairs, linear cluster states, Bell references and the mirror basis.
//!
//! The 2N-qubit mirror state is the uniform superposition of the kets
//! `|reflect(i)>|i>` over all N-bit strings `i`, where `reflect` reverses the
//! bit order, with a minus sign on the all-ones ket. Qubits `j` and
//! `2N - j + 1` always carry the same bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qcore::{apply_unitary, PauliString, StateVector, UnitaryGate, C64, PROBABILITY_TOL};
use crate::{Error, Result};

/// Largest half-size `N` accepted by the mirror-family constructors.
pub const MAX_HALF_SIZE: usize = 5;

fn check_half_size(n: usize) -> Result<()> {
    if (1..=MAX_HALF_SIZE).contains(&n) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("half-size N = {n} outside 1..={MAX_HALF_SIZE}")))
    }
}

/// Bit reversal of `index` over `n` bits.
pub fn reflect_index(index: usize, n: usize) -> Result<usize> {
    if n >= usize::BITS as usize || index >= 1 << n {
        return Err(Error::IndexOutOfRange { index, limit: 1usize.checked_shl(n as u32).unwrap_or(0) });
    }
    Ok((0..n).fold(0, |acc, b| (acc << 1) | ((index >> b) & 1)))
}

fn mirror_amplitudes(n: usize, flip_all_ones: bool) -> Result<StateVector> {
    check_half_size(n)?;
    let half = 1usize << n;
    let amp = 1.0 / (half as f64).sqrt();
    let mut amplitudes = vec![C64::new(0.0, 0.0); half * half];
    for i in 0..half {
        let sign = if flip_all_ones && i == half - 1 { -1.0 } else { 1.0 };
        amplitudes[(reflect_index(i, n)? << n) | i] = C64::new(sign * amp, 0.0);
    }
    StateVector::new(2 * n, amplitudes)
}

/// The 2N-qubit mirror state, built directly from its amplitudes.
pub fn mirror_state(n: usize) -> Result<StateVector> {
    mirror_amplitudes(n, true)
}

/// SWAP pairs that turn N adjacent Bell pairs into mirror-paired qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSchedule {
    pub pairs: Vec<(usize, usize)>,
}

/// `(2, 2N), (4, 2N-2), ...`: exactly `floor(N/2)` swaps. Pair `(2j-1, 2j)`
/// becomes `(2j-1, 2N-2j+2)`, which is the mirror pairing `(k, 2N-k+1)`.
pub fn swap_schedule(n: usize) -> Result<SwapSchedule> {
    check_half_size(n)?;
    let pairs = (1..=n / 2).map(|j| (2 * j, 2 * n - 2 * j + 2)).collect();
    Ok(SwapSchedule { pairs })
}

/// Two-qubit Bell states, named as in the source material:
/// `psi± = (|00> ± |11>)/√2`, `phi± = (|01> ± |10>)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus];

    pub fn state(self) -> StateVector {
        let a = match self {
            BellState::PsiPlus => [1.0, 0.0, 0.0, 1.0],
            BellState::PsiMinus => [1.0, 0.0, 0.0, -1.0],
            BellState::PhiPlus => [0.0, 1.0, 1.0, 0.0],
            BellState::PhiMinus => [0.0, 1.0, -1.0, 0.0],
        };
        StateVector::from_real(2, &a).expect("fixed Bell amplitudes")
    }
}

/// `(|x> + sign |~x>)/√2` on `m` qubits, where `~x` is the bitwise complement.
pub fn ghz_state(m: usize, x: usize, positive: bool) -> Result<StateVector> {
    if m == 0 || x >= 1 << m {
        return Err(Error::InvalidArgument(format!("GHZ pattern {x} on {m} qubits")));
    }
    let mut a = vec![0.0; 1 << m];
    a[x] = 1.0;
    a[x ^ ((1 << m) - 1)] = if positive { 1.0 } else { -1.0 };
    StateVector::from_real(m, &a)
}

/// `|psi+>` on every adjacent pair `(2k-1, 2k)`, prepared with H then CNOT.
pub fn bell_pairs(n: usize) -> Result<StateVector> {
    check_half_size(n)?;
    let mut state = StateVector::zero(2 * n)?;
    for k in 1..=n {
        state = apply_unitary(&state, &UnitaryGate::hadamard(2 * k - 1))?;
        state = apply_unitary(&state, &UnitaryGate::cnot(2 * k - 1, 2 * k)?)?;
    }
    Ok(state)
}

/// N Bell pairs rearranged by [`swap_schedule`].
pub fn rearranged_bell(n: usize) -> Result<StateVector> {
    let mut state = bell_pairs(n)?;
    for (a, b) in swap_schedule(n)?.pairs {
        state = apply_unitary(&state, &UnitaryGate::swap(a, b)?)?;
    }
    Ok(state)
}

/// The phase gate that turns rearranged Bell pairs into the mirror state:
/// `-1` on `|1...1>` of qubits `1..=N`.
pub fn mirror_phase_gate(n: usize) -> Result<UnitaryGate> {
    UnitaryGate::controlled_phase((1..=n).collect::<Vec<_>>())
}

/// Bell-pair preparation, the SWAP schedule, then the N-qubit controlled
/// phase on qubits `1..=N`.
pub fn mirror_from_circuit(n: usize) -> Result<StateVector> {
    let rearranged = rearranged_bell(n)?;
    apply_unitary(&rearranged, &mirror_phase_gate(n)?)
}

/// Linear cluster state `2^{-N/2} ⊗_a (|0>_a Z_{a+1} + |1>_a)` with
/// `Z_{N+1} = 1`, expanded literally: the amplitude of `|x1..xN>` is
/// `(-1)^{#{a : x_a = 0, x_{a+1} = 1}}`.
pub fn cluster_state(n: usize) -> Result<StateVector> {
    if n == 0 || n > crate::qcore::MAX_QUBITS {
        return Err(Error::Unsupported(format!("cluster size {n}")));
    }
    let amplitudes: Vec<f64> = (0..1usize << n)
        .map(|idx| {
            let bit = |a: usize| if a > n { 0 } else { (idx >> (n - a)) & 1 };
            let flips = (1..=n).filter(|&a| bit(a) == 0 && bit(a + 1) == 1).count();
            if flips % 2 == 0 { 1.0 } else { -1.0 }
        })
        .collect();
    StateVector::from_real(n, &amplitudes)
}

/// Complete orthonormal basis `{(P ⊗ I)|mirror>}` over all Pauli words `P`
/// on qubits `1..=N`, in word-index order.
#[derive(Clone, Debug)]
pub struct MirrorBasis {
    pub n: usize,
    pub states: Vec<StateVector>,
    pub labels: Vec<PauliString>,
}

impl MirrorBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Largest `|<a|b> - δ_ab|` over all pairs, using the sparse support of
    /// the basis states.
    pub fn gram_deviation(&self) -> f64 {
        let sparse: Vec<Vec<(usize, C64)>> = self
            .states
            .iter()
            .map(|s| {
                s.amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.norm() > 0.0)
                    .map(|(i, a)| (i, *a))
                    .collect()
            })
            .collect();
        let mut worst = 0.0f64;
        for (i, a) in sparse.iter().enumerate() {
            for (j, b) in sparse.iter().enumerate().skip(i) {
                let g = sparse_inner(a, b);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

fn sparse_inner(a: &[(usize, C64)], b: &[(usize, C64)]) -> C64 {
    let (mut i, mut j) = (0, 0);
    let mut acc = C64::new(0.0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn mirror_basis(n: usize) -> Result<MirrorBasis> {
    let zeta = mirror_state(n)?;
    let targets: Vec<usize> = (1..=n).collect();
    let labels = PauliString::all(&targets)?;
    let states = labels.iter().map(|p| p.apply(&zeta)).collect::<Result<Vec<_>>>()?;
    let basis = MirrorBasis { n, states, labels };
    let dev = basis.gram_deviation();
    if dev > PROBABILITY_TOL {
        return Err(Error::Construction(format!("mirror basis Gram deviation {dev:e}")));
    }
    Ok(basis)
}

/// State families exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Mirror,
    BellRearranged,
    Cluster,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Mirror => "mirror",
            Family::BellRearranged => "bell-rearranged",
            Family::Cluster => "cluster",
        }
    }

    /// Number of qubits the family uses for parameter `n`.
    pub fn num_qubits(self, n: usize) -> usize {
        match self {
            Family::Cluster => n,
            _ => 2 * n,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mirror" => Ok(Family::Mirror),
            "bell-rearranged" | "bell" => Ok(Family::BellRearranged),
            "cluster" => Ok(Family::Cluster),
            other => Err(Error::InvalidArgument(format!("unknown family '{other}'"))),
        }
    }
}

/// Which constructor produces a family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    Circuit,
}

/// `n` is the half-size for the mirror families and the qubit count for
/// cluster states.
pub fn build(family: Family, n: usize, method: Method) -> Result<StateVector> {
    match (family, method) {
        (Family::Mirror, Method::Direct) => mirror_state(n),
        (Family::Mirror, Method::Circuit) => mirror_from_circuit(n),
        (Family::BellRearranged, Method::Direct) => mirror_amplitudes(n, false),
        (Family::BellRearranged, Method::Circuit) => rearranged_bell(n),
        (Family::Cluster, _) => cluster_state(n),
    }
}
