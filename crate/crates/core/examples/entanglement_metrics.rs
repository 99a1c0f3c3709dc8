//! Entropy, pair ranks, connectedness, QECC alpha matrix and PPT checks.

use mirrorstate::metrics::{
    compare_symmetric_pair, connectedness_search, max_bipartite_entropy, ppt_all_splits, prefix_entropies, qecc_alpha,
};
use mirrorstate::states::{cluster_state, mirror_state};
use mirrorstate::QubitSet;

fn main() -> mirrorstate::Result<()> {
    for n in 2..=4 {
        let e = prefix_entropies(&mirror_state(n)?)?;
        println!("mirror N={n}: first-k entropies {:?}", e[..n].iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>());
    }

    for j in 1..=3 {
        let c = compare_symmetric_pair(3, j)?;
        let conn = connectedness_search(&mirror_state(3)?, c.pair)?;
        println!(
            "pair {:?}: rank {}, closed form agrees {}, connectedness {:.3} via {:?}",
            c.pair, c.rank, c.agrees, conn.value, conn.measured
        );
    }

    let (m, ms) = max_bipartite_entropy(&mirror_state(3)?, 3)?;
    let (c, cs) = max_bipartite_entropy(&cluster_state(6)?, 3)?;
    println!("max 3|3 entropy: mirror {m:.3} at {ms}, cluster {c:.3} at {cs}");

    let alpha = qecc_alpha(&mirror_state(3)?, &QubitSet::range(1, 3))?;
    println!("QECC alpha on qubits 1..3: {} words, |alpha - I| = {:.1e}", alpha.error_set.len(), alpha.identity_deviation());

    let splits = ppt_all_splits(&mirror_state(2)?.to_density())?;
    for s in splits {
        println!("negativity across {}: {:.4}", s.split, s.value);
    }
    Ok(())
}
