//! Preparation and measurement errors move A0 and B0 but not the decay base.

use qudit_rb::channels::{depolarizing, KrausChannel};
use qudit_rb::fitting::fit_decay;
use qudit_rb::qudit_algebra::{gate, CMatrix, GateKind};
use qudit_rb::rb::{run_rb, Mode, RBConfig};

fn main() -> qudit_rb::Result<()> {
    let mut cfg = RBConfig::new(3, 1, depolarizing(0.93, 3)?);
    cfg.mode = Mode::Exact;
    cfg.num_seq = 10;
    let clean = run_rb(&cfg)?;

    cfg.spam_prep = Some(depolarizing(0.8, 3)?);
    let prep = run_rb(&cfg)?;

    // readout that mislabels the outcome 20% of the time
    let x = gate(GateKind::X, 3)?;
    let flip = x.matrix().map(|z| z * 0.2f64.sqrt());
    let keep = CMatrix::identity(3, 3).map(|z| z * 0.8f64.sqrt());
    let mix = KrausChannel::new(vec![keep, flip])?;
    cfg.spam_meas = Some(mix);
    let both = run_rb(&cfg)?;

    for (name, ds) in [("clean", &clean), ("prep", &prep), ("prep+meas", &both)] {
        let f = fit_decay(&ds.lengths(), &ds.means(), None)?;
        println!("{name:>10}: p = {:.9}  A0 = {:.6}  B0 = {:.6}", f.p, f.a0, f.b0);
    }
    Ok(())
}
