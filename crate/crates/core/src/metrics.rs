//! Entanglement and error-correction diagnostics.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::qcore::{
    apply_unitary, hermitian_eigen, hermitian_eigenvalues, normalize_residual, partial_trace,
    partial_trace_pure, partial_transpose, DensityMatrix, IndexSplit, PauliString, QubitSet,
    StateVector, UnitaryGate, C64, EIGEN_TOL, PROBABILITY_TOL, ZERO_PROBABILITY,
};
use crate::{Error, Result};

/// Eigenvalues at or below this are treated as zero in rank counts.
pub const DEFAULT_RANK_TOL: f64 = EIGEN_TOL;

/// Partial-transpose eigenvalues must fall below `-NEGATIVITY_CUTOFF` to count.
pub const NEGATIVITY_CUTOFF: f64 = 1e-10;

fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.log2())
        .sum();
    s.max(0.0)
}

/// `-Σ λ log2 λ` in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.eigenvalues()?))
}

/// Entropy of entanglement of a pure state across `subset` versus the rest.
/// The smaller side is diagonalized.
pub fn subset_entropy(state: &StateVector, subset: &QubitSet) -> Result<f64> {
    let n = state.num_qubits();
    subset.check(n)?;
    if subset.is_empty() || subset.len() == n {
        return Ok(0.0);
    }
    let keep = if 2 * subset.len() <= n { subset.clone() } else { subset.complement(n) };
    von_neumann_entropy(&partial_trace_pure(state, &keep)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    /// The transposed party group.
    pub split: QubitSet,
    pub value: f64,
}

/// Sum of `|λ|` over partial-transpose eigenvalues below `-1e-10`.
pub fn negativity(rho: &DensityMatrix, split: &QubitSet) -> Result<NegativityReport> {
    let pt = partial_transpose(rho, split)?;
    let value = hermitian_eigenvalues(&pt)?
        .into_iter()
        .filter(|&l| l < -NEGATIVITY_CUTOFF)
        .fold(0.0, |acc, l| acc - l);
    Ok(NegativityReport { split: split.clone(), value })
}

fn psd_sqrt(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let roots = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)),
    ));
    Ok(&vecs * roots * vecs.adjoint())
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: rho.num_qubits() });
    }
    let m = rho.matrix();
    // sigma_y ⊗ sigma_y is real with entries ±1 on the antidiagonal.
    let yy = DMatrix::from_fn(4, 4, |r, c| {
        if r + c == 3 {
            C64::new(if r == 0 || r == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let flipped = &yy * m.map(|z| z.conj()) * &yy;
    let root = psd_sqrt(m)?;
    let r = &root * flipped * &root;
    let r = (&r + r.adjoint()) * C64::new(0.5, 0.0);
    let mut l: Vec<f64> = hermitian_eigenvalues(&r)?.into_iter().map(|x| x.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Number of eigenvalues above `tol`.
pub fn numerical_rank(rho: &DensityMatrix, tol: f64) -> Result<usize> {
    Ok(rho.eigenvalues()?.into_iter().filter(|&l| l > tol).count())
}

/// `I/4 + σ3σ3/4 + ((2^{n-1}-2)/2^{n+1})(σ1σ1 - σ2σ2)`, the predicted reduced
/// state of a mirror pair `(j, 2n-j+1)`.
pub fn symmetric_pair_closed_form(n: usize) -> Result<DensityMatrix> {
    if n == 0 || n > 30 {
        return Err(Error::InvalidArgument(format!("pair formula parameter n = {n}")));
    }
    let c = ((1u64 << (n - 1)) as f64 - 2.0) / (1u64 << (n + 1)) as f64;
    let mut m = DMatrix::<C64>::zeros(4, 4);
    m[(0, 0)] = C64::new(0.5, 0.0);
    m[(3, 3)] = C64::new(0.5, 0.0);
    // σ1σ1 - σ2σ2 has 2 on the |00><11| corners and 0 on |01><10|.
    m[(0, 3)] = C64::new(2.0 * c, 0.0);
    m[(3, 0)] = C64::new(2.0 * c, 0.0);
    DensityMatrix::new(2, m)
}

/// Closed form against the partial trace of the mirror state for one pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub n: usize,
    pub j: usize,
    pub pair: (usize, usize),
    pub max_abs_diff: f64,
    pub agrees: bool,
    pub rank: usize,
}

pub fn compare_symmetric_pair(n: usize, j: usize) -> Result<PairComparison> {
    if j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("pair index j = {j} for n = {n}")));
    }
    let pair = (j, 2 * n - j + 1);
    let state = crate::states::mirror_state(n)?;
    let reduced = partial_trace_pure(&state, &QubitSet::new(vec![pair.0, pair.1])?)?;
    let formula = symmetric_pair_closed_form(n)?;
    let max_abs_diff = reduced.max_abs_diff(&formula);
    Ok(PairComparison {
        n,
        j,
        pair,
        max_abs_diff,
        agrees: max_abs_diff <= 1e-12,
        rank: numerical_rank(&reduced, DEFAULT_RANK_TOL)?,
    })
}

/// Local measurement basis for one qubit in a connectedness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalBasis {
    Z,
    X,
    Y,
}

impl LocalBasis {
    fn rotation(self, q: usize) -> Option<UnitaryGate> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            LocalBasis::Z => None,
            LocalBasis::X => Some(UnitaryGate::hadamard(q)),
            // Maps |±i> to |0>, |1>.
            LocalBasis::Y => {
                let m = DMatrix::from_row_slice(2, 2, &[
                    C64::new(h, 0.0), C64::new(0.0, -h),
                    C64::new(h, 0.0), C64::new(0.0, h),
                ]);
                Some(UnitaryGate::new(m, vec![q]).expect("unitary"))
            }
        }
    }
}

/// Best conditional concurrence found by [`connectedness_search`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Connectedness {
    pub pair: (usize, usize),
    pub value: f64,
    /// Basis used on each measured qubit, in ascending qubit order.
    pub measured: Vec<(usize, LocalBasis)>,
}

/// Largest pair concurrence over the outcomes of a fixed product measurement.
fn conditional_concurrence(state: &StateVector, rest: &QubitSet, bases: &[LocalBasis]) -> Result<f64> {
    let mut rotated = state.clone();
    for (&q, b) in rest.members().iter().zip(bases) {
        if let Some(g) = b.rotation(q) {
            rotated = apply_unitary(&rotated, &g)?;
        }
    }
    let split = IndexSplit::new(state.num_qubits(), rest.members());
    let amps = rotated.amplitudes();
    let mut best = 0.0f64;
    for outcome in 0..1usize << rest.len() {
        let residual: Vec<C64> = (0..4).map(|r| amps[split.join(outcome, r)]).collect();
        let p: f64 = residual.iter().map(|a| a.norm_sqr()).sum();
        if p < ZERO_PROBABILITY {
            continue;
        }
        let s = normalize_residual(2, p, residual);
        best = best.max(concurrence(&s.to_density())?);
        if best >= 1.0 - EIGEN_TOL {
            break;
        }
    }
    Ok(best)
}

/// Largest complement size searched over all `3^m` Pauli settings.
pub const MAX_CONNECTEDNESS_SEARCH: usize = 8;

/// Measures every other qubit in a product of Z, X or Y bases and returns
/// the largest concurrence left on `pair`. The all-Z setting is tried first;
/// the search stops once a maximally entangled residual is found.
pub fn connectedness_search(state: &StateVector, pair: (usize, usize)) -> Result<Connectedness> {
    let n = state.num_qubits();
    let pair_set = QubitSet::new(vec![pair.0, pair.1])?;
    pair_set.check(n)?;
    let rest = pair_set.complement(n);
    let m = rest.len();
    if m > MAX_CONNECTEDNESS_SEARCH {
        return Err(Error::Unsupported(format!("connectedness search over {m} measured qubits")));
    }
    let mut best = Connectedness { pair, value: -1.0, measured: Vec::new() };
    for setting in 0..3usize.pow(m as u32) {
        let bases: Vec<LocalBasis> = (0..m)
            .map(|k| match (setting / 3usize.pow(k as u32)) % 3 {
                0 => LocalBasis::Z,
                1 => LocalBasis::X,
                _ => LocalBasis::Y,
            })
            .collect();
        let value = conditional_concurrence(state, &rest, &bases)?;
        if value > best.value + EIGEN_TOL {
            best = Connectedness { pair, value, measured: rest.members().iter().cloned().zip(bases).collect() };
        }
        if best.value >= 1.0 - EIGEN_TOL {
            break;
        }
    }
    Ok(best)
}

/// [`connectedness_search`] reduced to its value.
pub fn connectedness_check(state: &StateVector, pair: (usize, usize)) -> Result<f64> {
    Ok(connectedness_search(state, pair)?.value)
}

/// `⟨ψ|E_j† E_k|ψ⟩` over all Pauli words on a qubit subset.
#[derive(Clone, Debug, PartialEq)]
pub struct QeccAlphaMatrix {
    pub error_set: Vec<PauliString>,
    pub entries: DMatrix<C64>,
}

impl QeccAlphaMatrix {
    /// Largest entrywise distance from the identity.
    pub fn identity_deviation(&self) -> f64 {
        let d = self.entries.nrows();
        (&self.entries - DMatrix::<C64>::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn diagonal_deviation(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| (z - C64::new(1.0, 0.0)).norm()).fold(0.0, f64::max)
    }
}

/// Requires `2|qubits| <= n`, i.e. at most half the system.
pub fn qecc_alpha(state: &StateVector, qubits: &QubitSet) -> Result<QeccAlphaMatrix> {
    let n = state.num_qubits();
    qubits.check(n)?;
    if 2 * qubits.len() > n {
        return Err(Error::InvalidArgument(format!(
            "{} error qubits exceed half of {n}",
            qubits.len()
        )));
    }
    let error_set = PauliString::all(qubits.members())?;
    let images = error_set.par_iter().map(|e| e.apply(state)).collect::<Result<Vec<_>>>()?;
    let d = images.len();
    let mut entries = DMatrix::<C64>::zeros(d, d);
    for j in 0..d {
        for k in j..d {
            let g = images[j].inner(&images[k])?;
            entries[(j, k)] = g;
            entries[(k, j)] = g.conj();
        }
    }
    Ok(QeccAlphaMatrix { error_set, entries })
}

/// `S(Σ p_i ρ_i) - Σ p_i S(ρ_i)` in bits.
pub fn holevo_quantity(ensemble: &[(f64, DensityMatrix)]) -> Result<f64> {
    if ensemble.is_empty() {
        return Err(Error::InvalidArgument("empty ensemble".into()));
    }
    let total: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::InvalidArgument(format!("ensemble probabilities sum to {total}")));
    }
    let average = DensityMatrix::mixture(ensemble)?;
    let parts = ensemble
        .par_iter()
        .map(|(p, rho)| von_neumann_entropy(rho).map(|s| p * s))
        .collect::<Result<Vec<_>>>()?;
    Ok(von_neumann_entropy(&average)? - parts.iter().sum::<f64>())
}

/// One representative per bipartition: the smaller side, or the side holding
/// qubit 1 when both sides have equal size. Ordered by size, then
/// lexicographically.
pub fn bipartition_representatives(n: usize) -> Vec<QubitSet> {
    let mut out = Vec::new();
    for k in 1..=n / 2 {
        for s in subsets_of_size(n, k) {
            if 2 * k < n || s.contains(1) {
                out.push(s);
            }
        }
    }
    out
}

/// Negativity across every bipartition of `rho`.
pub fn ppt_all_splits(rho: &DensityMatrix) -> Result<Vec<NegativityReport>> {
    bipartition_representatives(rho.num_qubits())
        .par_iter()
        .map(|s| negativity(rho, s))
        .collect()
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<QubitSet> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<QubitSet>) {
        if cur.len() == k {
            out.push(QubitSet::new(cur.clone()).expect("distinct ascending"));
            return;
        }
        for q in start..=n {
            if n - q + 1 < k - cur.len() {
                break;
            }
            cur.push(q);
            go(q + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Largest entanglement entropy between a `k`-qubit subset and the rest.
/// Among subsets within `1e-9` of the maximum, the lexicographically first
/// one is returned.
pub fn max_bipartite_entropy(state: &StateVector, k: usize) -> Result<(f64, QubitSet)> {
    let n = state.num_qubits();
    if k > n {
        return Err(Error::InvalidArgument(format!("subset size {k} exceeds {n} qubits")));
    }
    let subsets = subsets_of_size(n, k);
    let values = subsets.par_iter().map(|s| subset_entropy(state, s)).collect::<Result<Vec<_>>>()?;
    let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pick = values.iter().position(|&v| v >= best - EIGEN_TOL).expect("nonempty");
    Ok((best, subsets[pick].clone()))
}

/// Entropy of the first `k` qubits for `k = 1..n-1`.
pub fn prefix_entropies(state: &StateVector) -> Result<Vec<f64>> {
    (1..state.num_qubits())
        .map(|k| subset_entropy(state, &QubitSet::range(1, k)))
        .collect()
}

/// Reduced state of a density matrix on a pair, in the given order.
pub fn pair_state(rho: &DensityMatrix, pair: (usize, usize)) -> Result<DensityMatrix> {
    partial_trace(rho, &QubitSet::new(vec![pair.0, pair.1])?)
}
