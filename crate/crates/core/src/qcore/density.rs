use nalgebra::DMatrix;

use super::{
    check_qubit_count, hermitian_eigenvalues, hermiticity_deviation, IndexSplit, QubitSet,
    StateVector, UnitaryGate, ALGEBRAIC_TOL, C64,
};
use crate::{Error, Result};

const MIN_EIGENVALUE: f64 = -1e-10;

/// Hermitian, positive semidefinite, unit-trace operator on `num_qubits`
/// qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace (within `1e-12`) and positivity
    /// (eigenvalues `>= -1e-10`).
    pub fn new(num_qubits: usize, matrix: DMatrix<C64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.nrows() });
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > ALGEBRAIC_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > ALGEBRAIC_TOL || trace.im.abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < MIN_EIGENVALUE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { num_qubits, matrix })
    }

    pub(crate) fn from_raw(num_qubits: usize, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), 1 << num_qubits);
        DensityMatrix { num_qubits, matrix }
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityMatrix { num_qubits: state.num_qubits(), matrix: &v * v.adjoint() }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let m = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Ok(DensityMatrix { num_qubits, matrix: m })
    }

    /// Convex mixture `sum p_i rho_i`; all terms must share a qubit count.
    pub fn mixture(terms: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = terms.first().ok_or(Error::InvalidArgument("empty mixture".into()))?;
        let n = first.1.num_qubits;
        let dim = first.1.dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for (p, rho) in terms {
            if rho.num_qubits != n {
                return Err(Error::DimensionMismatch { expected: n, got: rho.num_qubits });
            }
            acc += &rho.matrix * C64::new(*p, 0.0);
        }
        Ok(DensityMatrix { num_qubits: n, matrix: acc })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `U rho U^dagger`.
pub fn apply_channel_to_density(rho: &DensityMatrix, gate: &UnitaryGate) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    gate.check_fits(n)?;
    // U rho, then (U (U rho)^dagger)^dagger = U rho U^dagger.
    let mut left = rho.matrix.clone();
    gate.apply_columns(&mut left, n);
    let mut both = left.adjoint();
    gate.apply_columns(&mut both, n);
    Ok(DensityMatrix::from_raw(n, both.adjoint()))
}

/// Reduced state on `keep`, in `keep` order.
pub fn partial_trace(rho: &DensityMatrix, keep: &QubitSet) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyQubitSet);
    }
    let n = rho.num_qubits();
    keep.check(n)?;
    let split = IndexSplit::new(n, keep.members());
    let d = 1usize << split.sub_len();
    let rest = 1usize << split.rest_len();
    let out = DMatrix::from_fn(d, d, |a, b| {
        (0..rest).map(|r| rho.matrix[(split.join(a, r), split.join(b, r))]).sum()
    });
    Ok(DensityMatrix::from_raw(keep.len(), out))
}

/// Reduced state of a pure state on `keep`, without forming `|psi><psi|`.
pub fn partial_trace_pure(state: &StateVector, keep: &QubitSet) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyQubitSet);
    }
    let n = state.num_qubits();
    keep.check(n)?;
    let split = IndexSplit::new(n, keep.members());
    let d = 1usize << split.sub_len();
    let rest = 1usize << split.rest_len();
    let amps = state.amplitudes();
    let m = DMatrix::from_fn(d, rest, |a, r| amps[split.join(a, r)]);
    Ok(DensityMatrix::from_raw(keep.len(), &m * m.adjoint()))
}

/// Partial transpose over `subset`. The result is Hermitian but in general
/// not positive, so it is returned as a bare matrix.
pub fn partial_transpose(rho: &DensityMatrix, subset: &QubitSet) -> Result<DMatrix<C64>> {
    let n = rho.num_qubits();
    subset.check(n)?;
    let mask = IndexSplit::new(n, subset.members()).sub_mask();
    let dim = rho.dim();
    Ok(DMatrix::from_fn(dim, dim, |row, col| {
        let r = (row & !mask) | (col & mask);
        let c = (col & !mask) | (row & mask);
        rho.matrix[(r, c)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::hermitian_eigenvalues;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn psi_plus() -> StateVector {
        StateVector::from_real(2, &[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    fn zeta4() -> StateVector {
        let mut a = [0.0; 16];
        a[0b0000] = 0.5;
        a[0b0110] = 0.5;
        a[0b1001] = 0.5;
        a[0b1111] = -0.5;
        StateVector::from_real(4, &a).unwrap()
    }

    fn random_state(seed: u64, n: usize) -> StateVector {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        StateVector::random(n, &mut rng).unwrap()
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let bad_trace = DMatrix::<C64>::identity(2, 2);
        assert!(matches!(DensityMatrix::new(1, bad_trace), Err(Error::InvalidDensity(_))));
        let mut negative = DMatrix::<C64>::zeros(2, 2);
        negative[(0, 0)] = C64::new(1.5, 0.0);
        negative[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(1, negative).is_err());
        assert!(DensityMatrix::new(2, psi_plus().to_density().matrix().clone()).is_ok());
    }

    #[test]
    fn unitary_conjugation_cases() {
        let rho = random_state(1, 3).to_density();
        let same = apply_channel_to_density(&rho, &UnitaryGate::identity(vec![1, 2, 3]).unwrap()).unwrap();
        assert!(same.max_abs_diff(&rho) < 1e-15);

        let flipped = apply_channel_to_density(
            &StateVector::zero(1).unwrap().to_density(),
            &UnitaryGate::x(1),
        )
        .unwrap();
        assert!((flipped.get(1, 1).re - 1.0).abs() < 1e-15);

        let rotated = apply_channel_to_density(&rho, &UnitaryGate::cnot(3, 1).unwrap()).unwrap();
        assert!((rotated.purity() - 1.0).abs() < 1e-12);
        assert!((rotated.trace().re - 1.0).abs() < 1e-12);
        assert!(hermiticity_deviation(rotated.matrix()) < 1e-12);
    }

    #[test]
    fn trace_two_middle_qubits_of_zeta4() {
        let reduced = partial_trace(&zeta4().to_density(), &QubitSet::new(vec![1, 4]).unwrap()).unwrap();
        let mut expected = DMatrix::<C64>::zeros(4, 4);
        expected[(0, 0)] = C64::new(0.5, 0.0);
        expected[(3, 3)] = C64::new(0.5, 0.0);
        assert!((reduced.matrix() - expected).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn trace_half_of_bell_pair_is_mixed() {
        let reduced = partial_trace(&psi_plus().to_density(), &QubitSet::new(vec![1]).unwrap()).unwrap();
        assert!(reduced.max_abs_diff(&DensityMatrix::maximally_mixed(1).unwrap()) < 1e-15);
    }

    #[test]
    fn keep_all_and_keep_order() {
        let rho = random_state(2, 3).to_density();
        let all = partial_trace(&rho, &QubitSet::all(3)).unwrap();
        assert!(all.max_abs_diff(&rho) < 1e-15);
        assert!(matches!(partial_trace(&rho, &QubitSet::empty()), Err(Error::EmptyQubitSet)));

        // Keeping [2,1] equals keeping [1,2] with the qubits swapped.
        let psi = random_state(4, 3);
        let a = partial_trace_pure(&psi, &QubitSet::new(vec![2, 1]).unwrap()).unwrap();
        let b = partial_trace_pure(&psi.permute_qubits(&[2, 1, 3]).unwrap(), &QubitSet::new(vec![1, 2]).unwrap()).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14);
    }

    #[test]
    fn partial_transpose_trivial_subsets() {
        let rho = random_state(5, 2).to_density();
        let none = partial_transpose(&rho, &QubitSet::empty()).unwrap();
        assert_eq!(&none, rho.matrix());
        let full = partial_transpose(&rho, &QubitSet::all(2)).unwrap();
        assert_eq!(full, rho.matrix().transpose());
        let a = hermitian_eigenvalues(&full).unwrap();
        let b = rho.eigenvalues().unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));
    }

    #[test]
    fn dephased_bell_pair_partial_transpose() {
        // Coherences of |psi+><psi+| damped by gamma: PT min eigenvalue -gamma/2.
        let gamma = 0.37;
        let mut m = psi_plus().to_density().matrix().clone();
        m[(0, 3)] *= gamma;
        m[(3, 0)] *= gamma;
        let rho = DensityMatrix::new(2, m).unwrap();
        let pt = partial_transpose(&rho, &QubitSet::new(vec![1]).unwrap()).unwrap();
        let min = hermitian_eigenvalues(&pt).unwrap()[0];
        assert!((min + gamma / 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn schmidt_spectra_match(seed in any::<u64>(), mask in 1u32..31) {
            let n = 5;
            let psi = random_state(seed, n);
            let keep: Vec<usize> = (1..=n).filter(|q| mask & (1 << (q - 1)) != 0).collect();
            let keep = QubitSet::new(keep).unwrap();
            let other = keep.complement(n);
            prop_assume!(!other.is_empty());
            let mut a: Vec<f64> = partial_trace_pure(&psi, &keep).unwrap().eigenvalues().unwrap()
                .into_iter().filter(|v| *v > 1e-10).collect();
            let mut b: Vec<f64> = partial_trace_pure(&psi, &other).unwrap().eigenvalues().unwrap()
                .into_iter().filter(|v| *v > 1e-10).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }

        #[test]
        fn partial_transpose_is_an_involution(seed in any::<u64>(), mask in 0u32..16) {
            let rho = random_state(seed, 4).to_density();
            let subset = QubitSet::new((1..=4).filter(|q| mask & (1 << (q - 1)) != 0).collect::<Vec<_>>()).unwrap();
            let once = DensityMatrix::from_raw(4, partial_transpose(&rho, &subset).unwrap());
            let twice = partial_transpose(&once, &subset).unwrap();
            prop_assert_eq!(&twice, rho.matrix());
        }

        #[test]
        fn complement_transpose_shares_spectrum(seed in any::<u64>(), mask in 1u32..15) {
            let rho = random_state(seed, 4).to_density();
            let subset = QubitSet::new((1..=4).filter(|q| mask & (1 << (q - 1)) != 0).collect::<Vec<_>>()).unwrap();
            let a = hermitian_eigenvalues(&partial_transpose(&rho, &subset).unwrap()).unwrap();
            let b = hermitian_eigenvalues(&partial_transpose(&rho, &subset.complement(4)).unwrap()).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
        }
    }
}
