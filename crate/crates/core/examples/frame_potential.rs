//! Frame potentials: the Clifford groups reach the design value 2, the Pauli group does not.

use qudit_rb::channels::{frame_potential, group_frame_potential};
use qudit_rb::clifford::enumerate_group;
use qudit_rb::qudit_algebra::{pauli_group, DenseUnitary, PauliOperator};

fn main() -> qudit_rb::Result<()> {
    for d in [2, 3, 5] {
        let g = enumerate_group(d, 1)?;
        println!("Clifford d={d}: {:.12}", group_frame_potential(&g)?);
    }
    let paulis: Vec<DenseUnitary> = pauli_group(3, 1)?.iter().map(PauliOperator::to_dense).collect();
    println!("qutrit Paulis: {:.6}", frame_potential(&paulis));
    Ok(())
}
