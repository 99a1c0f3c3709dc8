//! Build the three state families and check the circuit construction.

use mirrorstate::states::{build, mirror_basis, swap_schedule, Family, Method};

fn main() -> mirrorstate::Result<()> {
    let z4 = build(Family::Mirror, 2, Method::Direct)?;
    println!("mirror N=2 nonzero amplitudes:");
    for (i, a) in z4.amplitudes().iter().enumerate().filter(|(_, a)| a.norm() > 1e-12) {
        println!("  |{i:04b}>  {:+.4}", a.re);
    }

    for n in 1..=5 {
        let direct = build(Family::Mirror, n, Method::Direct)?;
        let circuit = build(Family::Mirror, n, Method::Circuit)?;
        println!(
            "N={n}: swaps {:?}, circuit vs direct max diff {:.1e}",
            swap_schedule(n)?.pairs,
            circuit.max_abs_diff(&direct)
        );
    }

    let bell = build(Family::BellRearranged, 2, Method::Direct)?;
    println!("rearranged Bell vs mirror (N=2) max diff {:.3}", bell.max_abs_diff(&z4));

    let cluster = build(Family::Cluster, 4, Method::Direct)?;
    println!("cluster(4) has {} qubits", cluster.num_qubits());

    let basis = mirror_basis(2)?;
    println!("mirror basis N=2: {} states, Gram deviation {:.1e}", basis.len(), basis.gram_deviation());
    Ok(())
}
