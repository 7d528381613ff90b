//! Exact-mode benchmarking of a depolarized qutrit and the recovered error rate.

use qudit_rb::channels::depolarizing;
use qudit_rb::fitting::{error_rate_from_p, fit_decay};
use qudit_rb::rb::{run_rb, Mode, RBConfig};

fn main() -> qudit_rb::Result<()> {
    for p in [0.8, 0.9, 0.99] {
        let mut cfg = RBConfig::new(3, 1, depolarizing(p, 3)?);
        cfg.mode = Mode::Exact;
        cfg.num_seq = 5;
        let ds = run_rb(&cfg)?;
        let fit = fit_decay(&ds.lengths(), &ds.means(), None)?;
        println!(
            "p = {p}: p_hat = {:.10}, r_hat = {:.6e}, A0 = {:.6}, B0 = {:.6}",
            fit.p,
            error_rate_from_p(fit.p, 3, 1),
            fit.a0,
            fit.b0
        );
    }
    Ok(())
}
