//! Deterministic report bundle covering every headline result.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::decoherence::{
    critical_gamma, grid_sweep, negativity_table, phase_invariance_spread, uniform_negativity, DephasingParams,
    DEFAULT_GRID, DEFAULT_NEGATIVITY_TOL,
};
use crate::metrics::{
    compare_symmetric_pair, connectedness_search, holevo_quantity, max_bipartite_entropy, ppt_all_splits,
    prefix_entropies, qecc_alpha, subset_entropy,
};
use crate::protocols::{
    build_correction_table, qis_feasibility, qis_split, quoted_qis_collapse, single_party_purities,
    superdense_exhaustive, teleport_with_table, worked_example_analysis, PartyLayout,
};
use crate::qcore::{fidelity, MeasureMode, QubitSet, StateVector};
use crate::states::{
    cluster_state, mirror_basis, mirror_from_circuit, mirror_state, rearranged_bell, swap_schedule, Family,
};
use crate::decoherence::dephase;
use crate::Result;

/// One payload file of the bundle.
pub struct BundleFile {
    pub name: String,
    pub contents: String,
}

fn json_file<T: Serialize>(name: &str, value: &T) -> Result<BundleFile> {
    let mut contents = serde_json::to_string_pretty(value)?;
    contents.push('\n');
    Ok(BundleFile { name: name.to_string(), contents })
}

fn real_state(n: usize, kets: &[(usize, f64)]) -> Result<StateVector> {
    let mut a = vec![0.0; 1 << n];
    for &(k, v) in kets {
        a[k] = v;
    }
    StateVector::from_real(n, &a)
}

fn states_section() -> Result<Value> {
    let golden4 = real_state(4, &[(0b0000, 0.5), (0b0110, 0.5), (0b1001, 0.5), (0b1111, -0.5)])?;
    let z6 = mirror_state(3)?;
    let s = 1.0 / 8f64.sqrt();
    let natural = real_state(6, &[
        (0b000000, s), (0b001100, s), (0b010010, s), (0b011110, s),
        (0b110011, s), (0b111111, -s), (0b100001, s), (0b101101, s),
    ])?;
    let regrouped = z6.permute_qubits(&[1, 6, 3, 4, 5, 2])?;
    let pair_form: Vec<(usize, f64)> = (0..8usize)
        .map(|i| {
            let (i1, i2, i3) = ((i >> 2) & 1, (i >> 1) & 1, i & 1);
            ((i3 << 5) | (i3 << 4) | (i1 << 3) | (i1 << 2) | (i2 << 1) | i2, if i == 7 { -s } else { s })
        })
        .collect();
    let circuit: Vec<Value> = (1..=5)
        .map(|n| -> Result<Value> {
            Ok(json!({
                "n": n,
                "swaps": swap_schedule(n)?.pairs,
                "max_abs_diff": mirror_from_circuit(n)?.max_abs_diff(&mirror_state(n)?),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "four_qubit_mirror_vs_golden": mirror_state(2)?.max_abs_diff(&golden4),
        "six_qubit_natural_order_vs_golden": z6.max_abs_diff(&natural),
        "six_qubit_regrouped_pairs_1_6_3_4_5_2_vs_pair_form": regrouped.max_abs_diff(&real_state(6, &pair_form)?),
        "six_qubit_literal_relabel_vs_golden": regrouped.max_abs_diff(&natural),
        "circuit_vs_direct": circuit,
    }))
}

fn entropy_section() -> Result<Value> {
    let prefix: Vec<Value> = (2..=4)
        .map(|n| -> Result<Value> {
            let e = prefix_entropies(&mirror_state(n)?)?;
            Ok(json!({ "n": n, "first_k_entropy_bits": &e[..n] }))
        })
        .collect::<Result<_>>()?;
    let (mirror_max, mirror_subset) = max_bipartite_entropy(&mirror_state(3)?, 3)?;
    let cluster = cluster_state(6)?;
    let (cluster_max, cluster_subset) = max_bipartite_entropy(&cluster, 3)?;
    let contiguous = subset_entropy(&cluster, &QubitSet::range(1, 3))?;
    Ok(json!({
        "units": "bits",
        "mirror_prefix": prefix,
        "max_three_qubit_entropy": {
            "mirror_6": { "value": mirror_max, "subset": mirror_subset },
            "cluster_6": { "value": cluster_max, "subset": cluster_subset },
            "cluster_6_contiguous_1_2_3": contiguous,
        },
    }))
}

fn pairs_section() -> Result<Value> {
    let mut rows = Vec::new();
    for n in 2..=4 {
        for j in 1..=n {
            let c = compare_symmetric_pair(n, j)?;
            let conn = connectedness_search(&mirror_state(n)?, c.pair)?;
            rows.push(json!({
                "n": n,
                "j": j,
                "pair": c.pair,
                "rank": c.rank,
                "closed_form_max_abs_diff": c.max_abs_diff,
                "closed_form_agrees": c.agrees,
                "connectedness": conn.value,
                "measurement": conn.measured,
            }));
        }
    }
    let extra = connectedness_search(&mirror_state(2)?, (3, 4))?;
    Ok(json!({ "symmetric_pairs": rows, "mirror_4_pair_3_4": extra }))
}

fn teleport_section(seed: u64) -> Result<Value> {
    let mut per_n = Vec::new();
    for n in 1..=3 {
        let table = build_correction_table(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
        let mut min_fidelity = f64::INFINITY;
        let mut max_dev = 0.0f64;
        let mut bits_ok = true;
        for _ in 0..20 {
            let input = StateVector::random(n, &mut rng)?;
            let run = teleport_with_table(&input, &table, MeasureMode::Enumerate)?;
            min_fidelity = min_fidelity.min(run.min_fidelity());
            max_dev = max_dev.max(run.max_probability_deviation());
            bits_ok &= run.transcript.classical_bits_consistent()
                && run.transcript.branches().iter().all(|&b| run.transcript.classical_bits(b) == 2 * n);
        }
        per_n.push(json!({
            "n": n,
            "inputs": 20,
            "outcomes": 1usize << (2 * n),
            "min_fidelity": min_fidelity,
            "max_probability_deviation": max_dev,
            "classical_bits_per_run": 2 * n,
            "bit_accounting_ok": bits_ok,
            "controlled_phase_needed": table.uses_controlled_phase(),
            "corrections_differing_from_outcome_label": table.nontrivial_relabels(),
        }));
    }
    Ok(json!({ "runs": per_n, "three_qubit_worked_example": worked_example_analysis()? }))
}

fn superdense_section() -> Result<Value> {
    let mut rows = Vec::new();
    for n in 1..=3 {
        let basis = mirror_basis(n)?;
        let p = 1.0 / basis.len() as f64;
        let ensemble: Vec<_> = basis.states.iter().map(|s| (p, s.to_density())).collect();
        rows.push(json!({
            "n": n,
            "messages": basis.len(),
            "decode_errors": superdense_exhaustive(n)?,
            "holevo_bits": holevo_quantity(&ensemble)?,
            "qubits_sent": n,
        }));
    }
    Ok(json!({ "runs": rows }))
}

fn qis_section(seed: u64) -> Result<Value> {
    let mirror = mirror_state(3)?;
    let bell = rearranged_bell(3)?;
    let main = PartyLayout::three_party(&[1, 2, 3], &[4], &[5, 6], 6)?;
    let pairs = PartyLayout::three_party(&[1, 2], &[3, 4], &[5, 6], 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let secret = StateVector::random(2, &mut rng)?;
    let run = qis_split(&secret, &mirror, &main)?;
    let quoted = quoted_qis_collapse(&secret)?;
    let mut quoted_outcome = None;
    for (a, s) in &run.bob_charlie_states {
        if fidelity(s, &quoted)? > 1.0 - 1e-10 {
            quoted_outcome = Some(run.branches.iter().find(|b| b.alice_outcome == *a).map(|b| b.alice_label.clone()));
            break;
        }
    }
    let mut feasibility = Vec::new();
    for (name, channel) in [("mirror", &mirror), ("bell-rearranged", &bell)] {
        for layout in [&main, &pairs] {
            let split = qis_split(&secret, channel, layout).ok();
            feasibility.push(json!({
                "channel": name,
                "layout": layout.to_string(),
                "min_bob_charlie_entropy_bits": qis_feasibility(channel, layout, 2)?,
                "charlie_min_fidelity": split.as_ref().map(|r| r.min_fidelity()),
                "bob_required": split.as_ref().map(|r| r.bob_required),
                "max_single_party_purity_after_alice": split.as_ref().map(|r| r.max_single_party_purity),
            }));
        }
    }
    let purities: Vec<Value> = single_party_purities(&mirror, &main)?
        .into_iter()
        .map(|(p, v)| json!({ "party": p, "purity": v }))
        .collect();
    Ok(json!({
        "mirror_layout_1_2_3__4__5_6": {
            "branches": run.branches.len(),
            "min_fidelity": run.min_fidelity(),
            "quoted_collapse_found": quoted_outcome.is_some(),
            "quoted_collapse_alice_outcome": quoted_outcome.flatten(),
            "max_single_party_purity_after_alice": run.max_single_party_purity,
            "channel_share_purities": purities,
        },
        "feasibility": feasibility,
    }))
}

fn qecc_section() -> Result<Value> {
    let rows: Vec<Value> = (2..=3)
        .map(|n| -> Result<Value> {
            let alpha = qecc_alpha(&mirror_state(n)?, &QubitSet::range(1, n))?;
            Ok(json!({
                "n": n,
                "error_words": alpha.error_set.len(),
                "identity_deviation": alpha.identity_deviation(),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(json!({ "alpha_matrices": rows }))
}

fn grid_csv(family: Family) -> Result<(String, f64)> {
    let cells = grid_sweep(family, &DEFAULT_GRID)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["g1".to_string(), "g2".into(), "g3".into(), "g4".into()];
    for r in 1..=7 {
        header.push(format!("numeric_{r}"));
        header.push(format!("closed_form_{r}"));
    }
    header.push("max_abs_diff".into());
    w.write_record(&header)?;
    let mut worst = 0.0f64;
    for c in &cells {
        let mut rec: Vec<String> = c.gammas.iter().map(|g| g.to_string()).collect();
        for (a, b) in c.numeric.iter().zip(&c.closed_form) {
            rec.push(a.to_string());
            rec.push(b.to_string());
        }
        rec.push(c.max_abs_diff.to_string());
        w.write_record(&rec)?;
        worst = worst.max(c.max_abs_diff);
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?;
    Ok((String::from_utf8(bytes).expect("utf-8"), worst))
}

fn threshold_section() -> Result<Value> {
    let split = QubitSet::new(vec![1, 4])?;
    let mirror = mirror_state(2)?;
    let bell = rearranged_bell(2)?;
    let m = critical_gamma(&mirror, &split, DEFAULT_NEGATIVITY_TOL)?;
    let b = critical_gamma(&bell, &split, DEFAULT_NEGATIVITY_TOL)?;
    let mut bell_max = 0.0f64;
    let mut mirror_above_ok = true;
    for i in 1..=100 {
        let g = i as f64 / 100.0;
        bell_max = bell_max.max(uniform_negativity(&bell, &split, g)?);
        if let Some(gc) = m.gamma_crit {
            if g > gc {
                mirror_above_ok &= uniform_negativity(&mirror, &split, g)? > 0.0;
            }
        }
    }
    let root = 2f64.sqrt() - 1.0;
    Ok(json!({
        "split": split,
        "mirror": m,
        "bell_rearranged": b,
        "bell_rearranged_max_negativity_over_100_samples": bell_max,
        "mirror_positive_above_threshold": mirror_above_ok,
        "threshold_reading": {
            "sqrt2_minus_1": root,
            "gamma_crit_matches_sqrt2_minus_1": m.gamma_crit.map(|g| (g - root).abs() < 1e-6),
            "gamma_crit_squared_matches_sqrt2_minus_1": m.gamma_crit_squared.map(|g| (g - root).abs() < 1e-6),
            "note": "the quartic g^4 + 2 g^2 - 1 = 0 fixes g^2 = sqrt2 - 1; g itself is sqrt(sqrt2 - 1)",
        },
    }))
}

fn ppt_section() -> Result<Value> {
    let mut rows = Vec::new();
    for (name, state) in [("mirror", mirror_state(2)?), ("bell-rearranged", rearranged_bell(2)?)] {
        for g in [1.0, 0.8, 0.5] {
            let rho = dephase(&state.to_density(), &DephasingParams::uniform(4, g)?)?;
            let reports = ppt_all_splits(&rho)?;
            rows.push(json!({ "state": name, "gamma": g, "splits": reports }));
        }
    }
    Ok(json!({ "negativity_all_splits": rows }))
}

/// Every payload file, in write order. Identical for identical seeds.
pub fn bundle_files(seed: u64) -> Result<Vec<BundleFile>> {
    let mut files = vec![
        json_file("states.json", &states_section()?)?,
        json_file("entropy.json", &entropy_section()?)?,
        json_file("pairs.json", &pairs_section()?)?,
        json_file("teleport.json", &teleport_section(seed)?)?,
        json_file("superdense.json", &superdense_section()?)?,
        json_file("qis.json", &qis_section(seed)?)?,
        json_file("qecc.json", &qecc_section()?)?,
    ];
    let mut grid_summary = Vec::new();
    for (family, stem) in [(Family::Mirror, "mirror"), (Family::BellRearranged, "bell_rearranged")] {
        let state = if family == Family::Mirror { mirror_state(2)? } else { rearranged_bell(2)? };
        let table = negativity_table(&state, &DephasingParams::uniform(4, 0.8)?)?;
        files.push(BundleFile { name: format!("negativity_{stem}_gamma_0.8.csv"), contents: table.to_csv()? });
        let (csv, worst) = grid_csv(family)?;
        files.push(BundleFile { name: format!("negativity_grid_{stem}.csv"), contents: csv });
        grid_summary.push(json!({
            "state": family,
            "grid": DEFAULT_GRID,
            "cells": DEFAULT_GRID.len().pow(4),
            "max_abs_diff": worst,
            "phase_invariance_spread": phase_invariance_spread(&state, &[0.9, 0.7, 0.8, 0.6], 5, seed)?,
        }));
    }
    files.push(json_file("negativity_grid_summary.json", &grid_summary)?);
    files.push(json_file("critical_gamma.json", &threshold_section()?)?);
    files.push(json_file("ppt.json", &ppt_section()?)?);
    Ok(files)
}

/// Writes the payload files plus `manifest.json` (the only file with a
/// timestamp) into `out_dir`.
pub fn write_bundle(out_dir: &Path, seed: u64, metadata: Value) -> Result<Vec<String>> {
    fs::create_dir_all(out_dir)?;
    let files = bundle_files(seed)?;
    let mut names = Vec::new();
    for f in &files {
        fs::write(out_dir.join(&f.name), &f.contents)?;
        names.push(f.name.clone());
    }
    let manifest = json!({ "metadata": metadata, "files": names });
    fs::write(out_dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(names)
}
