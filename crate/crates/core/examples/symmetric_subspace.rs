//! H tensor H restricted to the two-qubit symmetric subspace is not a qutrit Clifford.

use qudit_rb::qudit_algebra::symmetric_counterexample;

fn main() -> qudit_rb::Result<()> {
    let c = symmetric_counterexample()?;
    println!("R =\n{:.6}", c.block.sym.map(|z| z.re));
    println!("antisymmetric phase {}, off-diagonal norm {:.1e}", c.block.antisym, c.block.offdiag_norm);
    println!("R X R^dag is a Pauli: {}", c.membership.is_some());
    println!("counterexample holds: {}", c.refutes());
    Ok(())
}
