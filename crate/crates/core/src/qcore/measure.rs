use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{IndexSplit, QubitSet, StateVector, C64, PROBABILITY_TOL, ZERO_PROBABILITY};
use crate::{Error, Result};

/// How [`measure_in_basis`] reports outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureMode {
    /// Every outcome with probability `>= 1e-14`, in basis order.
    Enumerate,
    /// One outcome drawn with a ChaCha8 generator seeded from the value.
    Sample(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub index: usize,
    pub probability: f64,
    /// Normalized post-measurement state of the unmeasured qubits, ascending.
    pub residual: StateVector,
}

/// Projects `state` onto `vector` on the `split` subset. Returns the
/// probability and the unnormalized residual on the complement.
pub(crate) fn project_onto(state: &StateVector, split: &IndexSplit, vector: &StateVector) -> (f64, Vec<C64>) {
    let rest = 1usize << split.rest_len();
    let amps = state.amplitudes();
    let b = vector.amplitudes();
    let residual: Vec<C64> = (0..rest)
        .map(|r| {
            b.iter()
                .enumerate()
                .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
                .map(|(s, c)| c.conj() * amps[split.join(s, r)])
                .sum()
        })
        .collect();
    let p = residual.iter().map(|a| a.norm_sqr()).sum();
    (p, residual)
}

pub(crate) fn normalize_residual(rest_qubits: usize, probability: f64, mut residual: Vec<C64>) -> StateVector {
    let norm = probability.sqrt();
    for a in &mut residual {
        *a /= norm;
    }
    StateVector::from_raw(rest_qubits, residual)
}

fn check_basis(subset: &QubitSet, basis: &[StateVector]) -> Result<()> {
    let m = subset.len();
    let dim = 1usize << m;
    if let Some(bad) = basis.iter().find(|b| b.num_qubits() != m) {
        return Err(Error::DimensionMismatch { expected: m, got: bad.num_qubits() });
    }
    let mut worst = 0.0f64;
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i..] {
            let g = a.inner(b)?;
            let target = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
            worst = worst.max((g - C64::new(target, 0.0)).norm());
        }
    }
    if worst > PROBABILITY_TOL {
        return Err(Error::NotOrthonormal(worst));
    }
    if basis.len() != dim {
        return Err(Error::IncompleteBasis { got: basis.len(), dim });
    }
    Ok(())
}

/// Projective measurement of the `subset` qubits onto an orthonormal basis
/// given in `subset` order. Residuals live on the remaining qubits in
/// ascending order.
pub fn measure_in_basis(
    state: &StateVector,
    subset: &QubitSet,
    basis: &[StateVector],
    mode: MeasureMode,
) -> Result<Vec<MeasurementOutcome>> {
    if subset.is_empty() {
        return Err(Error::EmptyQubitSet);
    }
    let n = state.num_qubits();
    subset.check(n)?;
    check_basis(subset, basis)?;
    let split = IndexSplit::new(n, subset.members());
    let rest_qubits = split.rest_len();

    let projections: Vec<(f64, Vec<C64>)> = basis.iter().map(|b| project_onto(state, &split, b)).collect();
    let total: f64 = projections.iter().map(|(p, _)| p).sum();
    debug_assert!((total - 1.0).abs() < PROBABILITY_TOL, "probabilities sum to {total}");

    let chosen: Vec<usize> = match mode {
        MeasureMode::Enumerate => (0..basis.len()).filter(|&i| projections[i].0 >= ZERO_PROBABILITY).collect(),
        MeasureMode::Sample(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draw: f64 = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, (p, _)) in projections.iter().enumerate() {
                if *p < ZERO_PROBABILITY {
                    continue;
                }
                acc += p;
                pick = Some(i);
                if draw < acc {
                    break;
                }
            }
            pick.into_iter().collect()
        }
    };

    Ok(chosen
        .into_iter()
        .map(|i| {
            let (p, residual) = projections[i].clone();
            MeasurementOutcome { index: i, probability: p, residual: normalize_residual(rest_qubits, p, residual) }
        })
        .collect())
}

/// Computational basis of `m` qubits.
pub fn computational_basis(m: usize) -> Vec<StateVector> {
    (0..1usize << m).map(|i| StateVector::basis(m, i).expect("m within limits")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{partial_trace_pure, DensityMatrix};
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn psi_plus() -> StateVector {
        StateVector::from_real(2, &[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn measure_half_of_bell_pair() {
        let out = measure_in_basis(&psi_plus(), &QubitSet::new(vec![1]).unwrap(), &computational_basis(1), MeasureMode::Enumerate).unwrap();
        assert_eq!(out.len(), 2);
        for (k, o) in out.iter().enumerate() {
            assert!((o.probability - 0.5).abs() < 1e-12);
            assert!((o.residual.amplitude(k).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn full_measurement_in_own_basis_is_certain() {
        let psi = psi_plus();
        let basis = vec![
            psi.clone(),
            StateVector::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap(),
            StateVector::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
            StateVector::from_real(2, &[0.0, 1.0, -1.0, 0.0]).unwrap(),
        ];
        let out = measure_in_basis(&psi, &QubitSet::all(2), &basis, MeasureMode::Enumerate).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].index, 0);
        assert!((out[0].probability - 1.0).abs() < 1e-12);
        assert_eq!(out[0].residual.num_qubits(), 0);
    }

    #[test]
    fn rejects_bad_bases() {
        let psi = psi_plus();
        let q1 = QubitSet::new(vec![1]).unwrap();
        let skew = vec![StateVector::basis(1, 0).unwrap(), StateVector::from_real(1, &[1.0, 1.0]).unwrap()];
        assert!(matches!(measure_in_basis(&psi, &q1, &skew, MeasureMode::Enumerate), Err(Error::NotOrthonormal(_))));
        let short = vec![StateVector::basis(1, 0).unwrap()];
        assert!(matches!(measure_in_basis(&psi, &q1, &short, MeasureMode::Enumerate), Err(Error::IncompleteBasis { .. })));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let psi = StateVector::uniform(3).unwrap();
        let q = QubitSet::new(vec![2, 3]).unwrap();
        let a = measure_in_basis(&psi, &q, &computational_basis(2), MeasureMode::Sample(11)).unwrap();
        let b = measure_in_basis(&psi, &q, &computational_basis(2), MeasureMode::Sample(11)).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a, b);
        let seen: std::collections::BTreeSet<usize> = (0..64)
            .map(|s| measure_in_basis(&psi, &q, &computational_basis(2), MeasureMode::Sample(s)).unwrap()[0].index)
            .collect();
        assert_eq!(seen.len(), 4);
    }

    proptest! {
        #[test]
        fn enumeration_reconstructs_reduced_state(seed in any::<u64>(), mask in 1u32..15) {
            let mut rng = <rand_chacha::ChaCha8Rng as SeedableRng>::seed_from_u64(seed);
            let psi = StateVector::random(4, &mut rng).unwrap();
            let subset = QubitSet::new((1..=4).filter(|q| mask & (1 << (q - 1)) != 0).collect::<Vec<_>>()).unwrap();
            let rest = subset.complement(4);
            let out = measure_in_basis(&psi, &subset, &computational_basis(subset.len()), MeasureMode::Enumerate).unwrap();
            let total: f64 = out.iter().map(|o| o.probability).sum();
            prop_assert!((total - 1.0).abs() <= 1e-10);
            let dim = 1 << rest.len();
            let mut acc = DMatrix::<C64>::zeros(dim, dim);
            for o in &out {
                acc += DensityMatrix::from_pure(&o.residual).matrix() * C64::new(o.probability, 0.0);
            }
            let reduced = partial_trace_pure(&psi, &rest).unwrap();
            let diff = (acc - reduced.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(diff <= 1e-10);
        }
    }
}
