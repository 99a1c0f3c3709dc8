//! Teleport a random N-qubit state through the 2N-qubit mirror channel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mirrorstate::protocols::{build_correction_table, teleport_with_table, worked_example_analysis};
use mirrorstate::{MeasureMode, StateVector};

fn main() -> mirrorstate::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=3 {
        let table = build_correction_table(n)?;
        let input = StateVector::random(n, &mut rng)?;
        let run = teleport_with_table(&input, &table, MeasureMode::Enumerate)?;
        println!(
            "N={n}: {} outcomes, min fidelity {:.12}, controlled phase needed {}",
            run.branches.len(),
            run.min_fidelity(),
            table.uses_controlled_phase()
        );
        let b = &run.branches[run.branches.len() - 1];
        println!("  e.g. outcome {} ({}) p={:.4} -> Bob applies {}", b.outcome, b.label, b.probability, b.correction);
    }

    let sampled = teleport_with_table(&StateVector::random(2, &mut rng)?, &build_correction_table(2)?, MeasureMode::Sample(5))?;
    print!("{}", sampled.transcript.to_json_lines()?);

    let w = worked_example_analysis()?;
    println!("three-qubit worked example: best quoted overlap {:.4} at {}", w.quoted_max_overlap, w.best_label);
    Ok(())
}
