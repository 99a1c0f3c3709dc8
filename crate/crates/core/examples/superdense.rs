//! Superdense coding of 2N classical bits through N qubits.

use mirrorstate::metrics::holevo_quantity;
use mirrorstate::protocols::{superdense_exhaustive, superdense_send};
use mirrorstate::states::mirror_basis;

fn main() -> mirrorstate::Result<()> {
    let run = superdense_send("1011", 2)?;
    println!("sent {} decoded {}", run.message, run.decoded);
    print!("{}", run.transcript.to_json_lines()?);

    for n in 1..=3 {
        let basis = mirror_basis(n)?;
        let p = 1.0 / basis.len() as f64;
        let ensemble: Vec<_> = basis.states.iter().map(|s| (p, s.to_density())).collect();
        println!(
            "N={n}: {} messages, {} decode errors, Holevo {:.6} bits",
            basis.len(),
            superdense_exhaustive(n)?,
            holevo_quantity(&ensemble)?
        );
    }
    Ok(())
}
