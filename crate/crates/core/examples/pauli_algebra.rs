//! Qutrit Pauli arithmetic: products, commutation phases and the dense check.

use qudit_rb::qudit_algebra::{phase_insensitive_distance, PauliOperator};

fn main() -> qudit_rb::Result<()> {
    let x = PauliOperator::x_on(3, 1, 0)?;
    let z = PauliOperator::z_on(3, 1, 0)?;
    let xz = x.mul(&z)?;
    let zx = z.mul(&x)?;
    println!("XZ phase exponent {}, ZX phase exponent {}", xz.phase(), zx.phase());
    println!("symplectic product <X, Z> = {}", x.symplectic_product(&z));
    println!("X^3 is identity: {}", x.pow(3).is_identity_up_to_phase());

    let dense = x.to_dense().matrix() * z.to_dense().matrix();
    println!("dense XZ vs exact product: {:.1e}", phase_insensitive_distance(&dense, xz.to_dense().matrix()));
    Ok(())
}
