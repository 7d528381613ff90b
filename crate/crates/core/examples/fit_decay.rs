//! Fit the exponential decay model to synthetic data with and without noise.

use qudit_rb::fitting::{average_fidelity_from_p, fit_decay};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> qudit_rb::Result<()> {
    let (a0, p, b0): (f64, f64, f64) = (0.6, 0.95, 1.0 / 3.0);
    let lengths: Vec<usize> = (2..=20).collect();
    let exact: Vec<f64> = lengths.iter().map(|&j| a0 * p.powi(j as i32 - 1) + b0).collect();
    let fit = fit_decay(&lengths, &exact, None)?;
    println!("exact data: A0 = {:.10} p = {:.10} B0 = {:.10}", fit.a0, fit.p, fit.b0);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noise = Normal::new(0.0, 0.005).unwrap();
    let noisy: Vec<f64> = exact.iter().map(|f| f + noise.sample(&mut rng)).collect();
    let fit = fit_decay(&lengths, &noisy, None)?;
    let se = fit.std_errors();
    println!("noisy data: p = {:.4} +- {:.4}, rms residual {:.2e}", fit.p, se[1], fit.residual_rms);
    println!("average gate fidelity for d=3: {:.5}", average_fidelity_from_p(fit.p, 3, 1));
    Ok(())
}
