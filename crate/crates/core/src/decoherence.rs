//! Collisional dephasing, four-qubit negativity tables and the distillability
//! threshold in the dephasing strength.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metrics::{bipartition_representatives, negativity};
use crate::qcore::{fidelity, DensityMatrix, QubitSet, StateVector, C64};
use crate::states::{mirror_state, rearranged_bell, Family};
use crate::{Error, Result};

/// Per-qubit coherence attenuation `γ` and accumulated phase `Φ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingParams {
    pub gammas: Vec<f64>,
    pub phis: Vec<f64>,
}

impl DephasingParams {
    pub fn new(gammas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if gammas.len() != phis.len() {
            return Err(Error::DimensionMismatch { expected: gammas.len(), got: phis.len() });
        }
        if let Some(g) = gammas.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(Error::InvalidArgument(format!("gamma {g} outside [0, 1]")));
        }
        if phis.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("non-finite phase".into()));
        }
        Ok(DephasingParams { gammas, phis })
    }

    /// Same `γ` on every qubit, no phase.
    pub fn uniform(num_qubits: usize, gamma: f64) -> Result<Self> {
        Self::new(vec![gamma; num_qubits], vec![0.0; num_qubits])
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Elementwise product of `γ`, sum of `Φ`: two channels in sequence.
    pub fn compose(&self, other: &DephasingParams) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Self::new(
            self.gammas.iter().zip(&other.gammas).map(|(a, b)| a * b).collect(),
            self.phis.iter().zip(&other.phis).map(|(a, b)| a + b).collect(),
        )
    }
}

/// Accumulates the per-collision factors of each qubit: `γ_i = Π λ_ij`,
/// `Φ_i = Σ φ_ij`. A qubit with no collisions gets `(1, 0)`.
pub fn gamma_from_collisions(lambdas: &[Vec<f64>], phis: &[Vec<f64>]) -> Result<DephasingParams> {
    if lambdas.len() != phis.len() {
        return Err(Error::DimensionMismatch { expected: lambdas.len(), got: phis.len() });
    }
    let mut gammas = Vec::with_capacity(lambdas.len());
    let mut total_phis = Vec::with_capacity(lambdas.len());
    for (ls, ps) in lambdas.iter().zip(phis) {
        if ls.len() != ps.len() {
            return Err(Error::DimensionMismatch { expected: ls.len(), got: ps.len() });
        }
        if let Some(l) = ls.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::InvalidArgument(format!("collision factor {l} outside [0, 1]")));
        }
        gammas.push(ls.iter().product());
        total_phis.push(ps.iter().sum());
    }
    DephasingParams::new(gammas, total_phis)
}

/// Multiplies each element by `γ_i e^{+iΦ_i}` for every qubit whose
/// (row, column) bits are `(0, 1)`, and by `γ_i e^{-iΦ_i}` for `(1, 0)`.
pub fn dephase(rho: &DensityMatrix, params: &DephasingParams) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    if params.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: params.len() });
    }
    let up: Vec<C64> = params.gammas.iter().zip(&params.phis).map(|(g, p)| C64::from_polar(*g, *p)).collect();
    let down: Vec<C64> = up.iter().map(|z| z.conj()).collect();
    let m = rho.matrix();
    let dim = rho.dim();
    let out = DMatrix::from_fn(dim, dim, |r, c| {
        let mut v = m[(r, c)];
        let diff = r ^ c;
        if diff != 0 {
            for i in 0..n {
                let shift = n - 1 - i;
                if (diff >> shift) & 1 == 1 {
                    v *= if (r >> shift) & 1 == 0 { up[i] } else { down[i] };
                }
            }
        }
        v
    });
    DensityMatrix::new(n, out)
}

/// Row labels of the four-qubit tables; parentheses mark transposed parties.
pub const TABLE_SPLITS: [&[usize]; 7] = [&[1], &[2], &[3], &[4], &[1, 2], &[1, 3], &[1, 4]];

/// `"(A1)A2A3(A4)"`-style label: runs of transposed parties share parentheses.
pub fn split_label(split: &QubitSet, num_qubits: usize) -> String {
    let mut s = String::new();
    let mut open = false;
    for q in 1..=num_qubits {
        let inside = split.contains(q);
        if inside && !open {
            s.push('(');
            open = true;
        }
        if !inside && open {
            s.push(')');
            open = false;
        }
        s.push_str(&format!("A{q}"));
    }
    if open {
        s.push(')');
    }
    s
}

fn shared(g: &[f64; 4]) -> (f64, f64, f64) {
    let g14 = g[0] * g[3];
    let g23 = g[1] * g[2];
    (g14, g23, g[0] * g[1] * g[2] * g[3] + g14 + g23)
}

/// Closed-form negativities of the dephased four-qubit rearranged Bell
/// state, in [`TABLE_SPLITS`] order.
pub fn closed_form_bell(g: &[f64; 4]) -> [f64; 7] {
    let (g14, g23, a) = shared(g);
    [g14 / 2.0, g23 / 2.0, g23 / 2.0, g14 / 2.0, a / 2.0, a / 2.0, 0.0]
}

/// Closed-form negativities of the dephased four-qubit mirror state.
pub fn closed_form_mirror(g: &[f64; 4]) -> [f64; 7] {
    let (g14, g23, a) = shared(g);
    [g14 / 2.0, g23 / 2.0, g23 / 2.0, g14 / 2.0, a / 2.0, a / 2.0, ((a - 1.0) / 4.0).max(0.0)]
}

pub fn closed_form(family: Family, g: &[f64; 4]) -> Option<[f64; 7]> {
    match family {
        Family::Mirror => Some(closed_form_mirror(g)),
        Family::BellRearranged => Some(closed_form_bell(g)),
        Family::Cluster => None,
    }
}

/// Four-qubit states with a closed-form table, recognized up to global phase.
pub fn detect_family(state: &StateVector) -> Option<Family> {
    if state.num_qubits() != 4 {
        return None;
    }
    let same = |other: StateVector| fidelity(state, &other).map(|f| f > 1.0 - 1e-12).unwrap_or(false);
    if same(mirror_state(2).ok()?) {
        Some(Family::Mirror)
    } else if same(rearranged_bell(2).ok()?) {
        Some(Family::BellRearranged)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityRow {
    pub split: String,
    pub numeric: f64,
    pub closed_form: Option<f64>,
    pub abs_diff: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityTable {
    pub family: Option<Family>,
    pub params: DephasingParams,
    pub rows: Vec<NegativityRow>,
}

impl NegativityTable {
    pub fn max_abs_diff(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.abs_diff).collect::<Option<Vec<_>>>().map(|d| d.into_iter().fold(0.0, f64::max))
    }

    pub fn numeric(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.numeric).collect()
    }

    /// Columns `split, numeric, closed_form, abs_diff`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Dephases `|state><state|` and tabulates the negativity of the seven
/// four-qubit splits, paired with the closed form when one applies.
pub fn negativity_table(state: &StateVector, params: &DephasingParams) -> Result<NegativityTable> {
    if state.num_qubits() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: state.num_qubits() });
    }
    let rho = dephase(&state.to_density(), params)?;
    let family = detect_family(state);
    let gammas: [f64; 4] = params.gammas.clone().try_into().expect("length checked by dephase");
    let closed = family.and_then(|f| closed_form(f, &gammas));
    let rows = TABLE_SPLITS
        .iter()
        .enumerate()
        .map(|(i, members)| {
            let split = QubitSet::new(members.to_vec())?;
            let numeric = negativity(&rho, &split)?.value;
            let closed_form = closed.map(|c| c[i]);
            Ok(NegativityRow {
                split: split_label(&split, 4),
                numeric,
                closed_form,
                abs_diff: closed_form.map(|c| (c - numeric).abs()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NegativityTable { family, params: params.clone(), rows })
}

/// One `γ` assignment of a grid sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub gammas: [f64; 4],
    pub numeric: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub max_abs_diff: f64,
}

/// Every `γ ∈ levels⁴` (first qubit slowest), computed in parallel and
/// returned in grid order.
pub fn grid_sweep(family: Family, levels: &[f64]) -> Result<Vec<GridCell>> {
    let state = match family {
        Family::Mirror => mirror_state(2)?,
        Family::BellRearranged => rearranged_bell(2)?,
        Family::Cluster => return Err(Error::Unsupported("no closed-form table for cluster states".into())),
    };
    let l = levels.len();
    (0..l.pow(4))
        .into_par_iter()
        .map(|cell| {
            let gammas = [levels[cell / (l * l * l)], levels[(cell / (l * l)) % l], levels[(cell / l) % l], levels[cell % l]];
            let table = negativity_table(&state, &DephasingParams::new(gammas.to_vec(), vec![0.0; 4])?)?;
            let closed: Vec<f64> = table.rows.iter().map(|r| r.closed_form.unwrap_or(f64::NAN)).collect();
            Ok(GridCell {
                gammas,
                numeric: table.numeric(),
                closed_form: closed,
                max_abs_diff: table.max_abs_diff().unwrap_or(f64::NAN),
            })
        })
        .collect()
}

/// The five-level grid `{0, 0.25, 0.5, 0.75, 1}`.
pub const DEFAULT_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Largest spread of any table row over `samples` random phase vectors
/// drawn from `seed`, at fixed `γ`.
pub fn phase_invariance_spread(state: &StateVector, gammas: &[f64], samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = negativity_table(state, &DephasingParams::new(gammas.to_vec(), vec![0.0; gammas.len()])?)?.numeric();
    let mut spread = 0.0f64;
    for _ in 0..samples {
        let phis: Vec<f64> = (0..gammas.len()).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        let t = negativity_table(state, &DephasingParams::new(gammas.to_vec(), phis)?)?;
        for (a, b) in t.numeric().iter().zip(&base) {
            spread = spread.max((a - b).abs());
        }
    }
    Ok(spread)
}

/// Negativity across `split` after uniform dephasing with strength `γ`.
pub fn uniform_negativity(state: &StateVector, split: &QubitSet, gamma: f64) -> Result<f64> {
    let params = DephasingParams::uniform(state.num_qubits(), gamma)?;
    Ok(negativity(&dephase(&state.to_density(), &params)?, split)?.value)
}

/// Negativity threshold and bisection tolerance defaults.
pub const DEFAULT_NEGATIVITY_TOL: f64 = 1e-10;
pub const GAMMA_TOL: f64 = 1e-8;
/// Below this `γ` an onset is reported as zero.
pub const GAMMA_FLOOR: f64 = 1e-3;
const MONOTONE_SAMPLES: usize = 101;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalGamma {
    /// Smallest uniform `γ` with negativity above the threshold; `None` when
    /// the split stays PPT up to `γ = 1`.
    pub gamma_crit: Option<f64>,
    pub gamma_crit_squared: Option<f64>,
    pub iterations: usize,
    pub never_distillable: bool,
}

/// Bisection for the onset of negativity under uniform dephasing. The
/// profile is first sampled at 101 points and must be nondecreasing.
pub fn critical_gamma(state: &StateVector, split: &QubitSet, tol: f64) -> Result<CriticalGamma> {
    let profile = (0..MONOTONE_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let g = i as f64 / (MONOTONE_SAMPLES - 1) as f64;
            uniform_negativity(state, split, g).map(|v| (g, v))
        })
        .collect::<Result<Vec<_>>>()?;
    for w in profile.windows(2) {
        let drop = w[0].1 - w[1].1;
        if drop > tol {
            return Err(Error::NonMonotone { gamma: w[1].0, drop });
        }
    }
    let found = |g: f64| uniform_negativity(state, split, g).map(|v| v > tol);
    if !found(1.0)? {
        return Ok(CriticalGamma { gamma_crit: None, gamma_crit_squared: None, iterations: 0, never_distillable: true });
    }
    if found(GAMMA_FLOOR)? {
        return Ok(CriticalGamma { gamma_crit: Some(0.0), gamma_crit_squared: Some(0.0), iterations: 0, never_distillable: false });
    }
    let (mut lo, mut hi) = (GAMMA_FLOOR, 1.0);
    let mut iterations = 0;
    while hi - lo > GAMMA_TOL {
        let mid = 0.5 * (lo + hi);
        if found(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(CriticalGamma { gamma_crit: Some(hi), gamma_crit_squared: Some(hi * hi), iterations, never_distillable: false })
}

/// Splits of an `n`-qubit state, one per bipartition.
pub fn all_splits(n: usize) -> Vec<QubitSet> {
    bipartition_representatives(n)
}
