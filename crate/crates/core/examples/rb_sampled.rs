//! Finite-shot benchmarking with coherent over-rotation noise on two qubits.

use qudit_rb::channels::KrausChannel;
use qudit_rb::cli::over_rotation;
use qudit_rb::fitting::{error_rate_from_p, fit_decay};
use qudit_rb::rb::{run_rb, RBConfig};

fn main() -> qudit_rb::Result<()> {
    let mut cfg = RBConfig::new(2, 2, KrausChannel::unitary(&over_rotation(4, 0.25)?));
    cfg.max_len = 30;
    cfg.num_seq = 40;
    cfg.num_copies = 500;
    cfg.seed = 11;
    let ds = run_rb(&cfg)?;
    for (j, f) in ds.lengths().iter().zip(ds.means()) {
        println!("m = {j:>2}  F = {f:.4}");
    }
    let fit = fit_decay(&ds.lengths(), &ds.means(), None)?;
    let [sa, sp, sb] = fit.std_errors();
    println!("p_hat = {:.5} +- {sp:.5}, A0 = {:.4} +- {sa:.4}, B0 = {:.4} +- {sb:.4}", fit.p, fit.a0, fit.b0);
    println!("r_hat = {:.3e}", error_rate_from_p(fit.p, 4, 1));
    Ok(())
}
