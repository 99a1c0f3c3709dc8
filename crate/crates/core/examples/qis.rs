//! Split a two-qubit secret between Bob and Charlie.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mirrorstate::protocols::{qis_feasibility, qis_split, PartyLayout};
use mirrorstate::states::{mirror_state, rearranged_bell};
use mirrorstate::StateVector;

fn main() -> mirrorstate::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let secret = StateVector::random(2, &mut rng)?;
    let mirror = mirror_state(3)?;
    let bell = rearranged_bell(3)?;

    for text in ["1,2,3/4/5,6", "1,2/3,4/5,6"] {
        let layout = PartyLayout::parse(text, 6)?;
        for (name, channel) in [("mirror", &mirror), ("rearranged Bell", &bell)] {
            let feasibility = qis_feasibility(channel, &layout, 2)?;
            match qis_split(&secret, channel, &layout) {
                Ok(run) => println!(
                    "{text} {name}: feasibility {feasibility:.3}, {} branches, min fidelity {:.10}, Bob required {}",
                    run.branches.len(),
                    run.min_fidelity(),
                    run.bob_required
                ),
                Err(e) => println!("{text} {name}: feasibility {feasibility:.3}, no correction ({e})"),
            }
        }
    }
    Ok(())
}
