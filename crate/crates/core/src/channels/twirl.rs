use rayon::prelude::*;

use super::kraus::KrausChannel;
use super::superop::Superoperator;
use crate::clifford::CliffordGroupTable;
use crate::qudit_algebra::{CMatrix, DenseUnitary};
use crate::{Error, Result};

const LEAF: usize = 16;

/// Sum of `f(i)` for `i` in `lo..hi` with a fixed binary tree shape, so the result
/// does not depend on how rayon schedules the halves.
fn tree_sum<F>(lo: usize, hi: usize, f: &F) -> CMatrix
where
    F: Fn(usize) -> CMatrix + Sync,
{
    if hi - lo <= LEAF {
        let mut acc = f(lo);
        for i in lo + 1..hi {
            acc += f(i);
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    let (a, b) = rayon::join(|| tree_sum(lo, mid, f), || tree_sum(mid, hi, f));
    a + b
}

/// Uniform average of `C^dag Lambda(C rho C^dag) C` over the given unitaries.
pub fn twirl_over(ch: &KrausChannel, unitaries: &[DenseUnitary]) -> Result<Superoperator> {
    if unitaries.is_empty() {
        return Err(Error::OutOfRange("twirl over an empty set".into()));
    }
    if let Some(u) = unitaries.iter().find(|u| u.dim() != ch.dim()) {
        return Err(Error::DimensionMismatch { expected: ch.dim().to_string(), found: u.dim().to_string() });
    }
    let s = Superoperator::from_kraus(ch);
    let sm = s.matrix();
    let term = |i: usize| {
        let m = unitaries[i].matrix();
        let sc = m.conjugate().kronecker(m);
        sc.adjoint() * sm * sc
    };
    let total = tree_sum(0, unitaries.len(), &term);
    Superoperator::new(ch.dim(), total / num_complex::Complex64::new(unitaries.len() as f64, 0.0))
}

/// Exact twirl over every element of an enumerated Clifford group.
pub fn twirl(ch: &KrausChannel, group: &CliffordGroupTable) -> Result<Superoperator> {
    twirl_over(ch, group.dense_elements()?)
}

/// `(1/K^2) sum_ij |tr(U_i^dag U_j)|^4`.
pub fn frame_potential(unitaries: &[DenseUnitary]) -> f64 {
    let k = unitaries.len();
    if k == 0 {
        return 0.0;
    }
    let rows: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|i| {
            let a = unitaries[i].matrix();
            unitaries
                .iter()
                .map(|b| {
                    let tr: num_complex::Complex64 =
                        a.iter().zip(b.matrix().iter()).map(|(x, y)| x.conj() * y).sum();
                    tr.norm_sqr().powi(2)
                })
                .sum()
        })
        .collect();
    rows.iter().sum::<f64>() / (k * k) as f64
}

pub fn group_frame_potential(group: &CliffordGroupTable) -> Result<f64> {
    Ok(frame_potential(group.dense_elements()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, is_depolarizing};
    use crate::clifford::enumerate_group;
    use crate::qudit_algebra::pauli_group;

    #[test]
    fn depolarizing_is_fixed() {
        let g = enumerate_group(3, 1).unwrap();
        let ch = depolarizing(0.6, 3).unwrap();
        let t = twirl(&ch, &g).unwrap();
        assert!(t.distance(&ch.superoperator()) < 1e-12);
        let id = twirl(&KrausChannel::identity(3), &g).unwrap();
        assert!(id.distance(&Superoperator::identity(3)) < 1e-12);
    }

    #[test]
    fn frame_potentials() {
        for (d, n) in [(2, 1), (3, 1)] {
            let g = enumerate_group(d, n).unwrap();
            let fp = group_frame_potential(&g).unwrap();
            assert!((fp - 2.0).abs() < 1e-9, "d={d}: {fp}");
        }
        let paulis: Vec<_> = pauli_group(3, 1).unwrap().iter().map(|p| p.to_dense()).collect();
        // only the 9 diagonal pairs contribute, each 3^4
        assert!((frame_potential(&paulis) - 9.0).abs() < 1e-9);
    }

    #[test]
    fn rotation_twirls_to_depolarizing() {
        let g = enumerate_group(2, 1).unwrap();
        let u = crate::qudit_algebra::gate(crate::qudit_algebra::GateKind::T, 2).unwrap();
        let ch = KrausChannel::unitary(&u);
        let t = twirl(&ch, &g).unwrap();
        let p = is_depolarizing(&t, 1e-10).unwrap();
        let f = ch.average_fidelity();
        assert!((p - (2.0 * f - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let g = enumerate_group(2, 1).unwrap();
        assert!(twirl(&KrausChannel::identity(3), &g).is_err());
    }
}
