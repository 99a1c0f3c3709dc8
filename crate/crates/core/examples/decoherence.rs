//! Dephase the four-qubit states and locate the distillability threshold.

use mirrorstate::decoherence::{critical_gamma, negativity_table, DephasingParams, DEFAULT_NEGATIVITY_TOL};
use mirrorstate::states::{mirror_state, rearranged_bell};
use mirrorstate::QubitSet;

fn main() -> mirrorstate::Result<()> {
    let params = DephasingParams::new(vec![0.9, 0.8, 0.7, 0.6], vec![0.1, 0.2, 0.3, 0.4])?;
    for (name, state) in [("mirror", mirror_state(2)?), ("rearranged Bell", rearranged_bell(2)?)] {
        let table = negativity_table(&state, &params)?;
        println!("{name}:");
        for row in &table.rows {
            println!("  {:>8}  numeric {:.6}  closed form {:?}", row.split, row.numeric, row.closed_form);
        }
        let crit = critical_gamma(&state, &QubitSet::new(vec![1, 4])?, DEFAULT_NEGATIVITY_TOL)?;
        match crit.gamma_crit {
            Some(g) => println!("  split 1,4: gamma_crit {g:.6}, gamma_crit^2 {:.6}", g * g),
            None => println!("  split 1,4: never distillable"),
        }
    }
    Ok(())
}
