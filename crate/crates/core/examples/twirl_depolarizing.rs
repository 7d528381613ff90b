//! Twirling an arbitrary channel over the Clifford group gives a depolarizing channel
//! with the same average fidelity.

use qudit_rb::channels::haar::random_channel;
use qudit_rb::channels::{is_depolarizing, twirl};
use qudit_rb::clifford::enumerate_group;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qudit_rb::Result<()> {
    let g = enumerate_group(3, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let ch = random_channel(3, 2, &mut rng);
        let f = ch.average_fidelity();
        let t = twirl(&ch, &g)?;
        let p = is_depolarizing(&t, 1e-9);
        println!("F = {f:.6}, twirl depolarizing with p = {p:?}, (3F - 1)/2 = {:.6}", (3.0 * f - 1.0) / 2.0);
    }
    Ok(())
}
