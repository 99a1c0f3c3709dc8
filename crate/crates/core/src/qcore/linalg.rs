use nalgebra::{DMatrix, SymmetricEigen};

use super::C64;
use crate::{Error, Result};

const HERMITIAN_INPUT_TOL: f64 = 1e-10;

/// Largest `|m_ij - conj(m_ji)|`; infinite for non-square input.
pub fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn symmetrized(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    let dev = hermiticity_deviation(m);
    if dev > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok((m + m.adjoint()) * C64::new(0.5, 0.0))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let h = symmetrized(m)?;
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Ascending eigenvalues with matching unit eigenvectors as columns.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let h = symmetrized(m)?;
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok((vals, vecs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_and_diagonal() {
        let id = DMatrix::<C64>::identity(4, 4);
        assert!(hermitian_eigenvalues(&id).unwrap().iter().all(|v| (v - 1.0).abs() < 1e-12));

        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0, 0.0), c(-2.0, 0.0)]));
        assert_eq!(hermitian_eigenvalues(&d).unwrap(), vec![-2.0, 3.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn partial_transpose_of_bell_pair_spectrum() {
        // Hand-written PT_1 of |psi+><psi+| with psi+ = (|00>+|11>)/sqrt2.
        let h = 0.5;
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = c(h, 0.0);
        m[(3, 3)] = c(h, 0.0);
        m[(1, 2)] = c(h, 0.0);
        m[(2, 1)] = c(h, 0.0);
        let vals = hermitian_eigenvalues(&m).unwrap();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12, "{vals:?}");
        }
    }

    proptest! {
        #[test]
        fn reconstruction_residual_is_small(entries in proptest::collection::vec(-1.0f64..1.0, 2 * 36)) {
            let n = 6;
            let a = DMatrix::from_fn(n, n, |r, k| c(entries[r * n + k], entries[36 + r * n + k]));
            let h = &a + a.adjoint();
            let (vals, vecs) = hermitian_eigen(&h).unwrap();
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n, vals.iter().map(|&v| c(v, 0.0))));
            let rebuilt = &vecs * d * vecs.adjoint();
            let residual = (rebuilt - &h).iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(residual <= 1e-9);
            prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
