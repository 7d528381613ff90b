use rand::Rng;

use crate::clifford::{random_clifford, CliffordGroupTable, CliffordTableau};
use crate::{Error, Result};

fn check_length(j: usize) -> Result<()> {
    if j < 2 {
        return Err(Error::OutOfRange(format!("sequence length must be at least 2, got {j}")));
    }
    Ok(())
}

/// `j - 1` uniformly random Cliffords followed by the inverse of their composition.
pub fn generate_sequence<R: Rng + ?Sized>(j: usize, d: u32, n: usize, rng: &mut R) -> Result<Vec<CliffordTableau>> {
    check_length(j)?;
    let mut gates = Vec::with_capacity(j);
    let mut acc = CliffordTableau::identity(d, n)?;
    for _ in 0..j - 1 {
        let g = random_clifford(d, n, rng)?;
        acc = acc.compose(&g)?;
        gates.push(g);
    }
    gates.push(acc.invert());
    Ok(gates)
}

/// Same as [`generate_sequence`] but drawing element indices of an enumerated group.
pub fn generate_indexed_sequence<R: Rng + ?Sized>(
    j: usize,
    group: &CliffordGroupTable,
    rng: &mut R,
) -> Result<Vec<usize>> {
    check_length(j)?;
    let mut gates = Vec::with_capacity(j);
    let mut acc = 0;
    for _ in 0..j - 1 {
        let g = rng.random_range(0..group.len());
        acc = group.mul(acc, g);
        gates.push(g);
    }
    gates.push(group.inv(acc));
    Ok(gates)
}

/// Composition of a gate list in application order.
pub fn compose_sequence(gates: &[CliffordTableau]) -> Result<CliffordTableau> {
    let first = gates.first().ok_or_else(|| Error::OutOfRange("empty sequence".into()))?;
    let mut acc = CliffordTableau::identity(first.d(), first.num_qudits())?;
    for g in gates {
        acc = acc.compose(g)?;
    }
    Ok(acc)
}
