//! Draw uniform random Cliffords from tableaux and check the empirical histogram
//! against the enumerated qutrit group.

use qudit_rb::clifford::{enumerate_group, random_clifford};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qudit_rb::Result<()> {
    let g = enumerate_group(3, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws = 21_600;
    let mut counts = vec![0u32; g.len()];
    for _ in 0..draws {
        let c = random_clifford(3, 1, &mut rng)?;
        counts[g.index_of(&c).expect("sample lies in the group")] += 1;
    }
    let expected = draws as f64 / g.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    println!("min {} max {} expected {expected}", counts.iter().min().unwrap(), counts.iter().max().unwrap());
    println!("chi-square {chi2:.1} with {} degrees of freedom", g.len() - 1);

    let two = random_clifford(5, 2, &mut rng)?;
    println!("a random two-ququint Clifford synthesizes to a {}x{} unitary", two.to_dense()?.dim(), two.to_dense()?.dim());
    Ok(())
}
