use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Dyn, U1};
use num_complex::Complex64;
use serde::Serialize;

use super::{complex_matrix_serde, gate, pauli_membership, CMatrix, DenseUnitary, GateKind, PhasedPauli};
use crate::{Error, Result};

/// Two-qubit basis `{|00>, (|01>+|10>)/sqrt2, |11>, (|01>-|10>)/sqrt2}` as the columns
/// of a `4 x 4` orthogonal matrix.
pub fn symmetric_basis() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    let r = |x: f64| Complex64::new(x, 0.0);
    #[rustfmt::skip]
    let entries = [
        r(1.0), r(0.0), r(0.0), r(0.0),
        r(0.0), r(h),   r(0.0), r(h),
        r(0.0), r(h),   r(0.0), r(-h),
        r(0.0), r(0.0), r(1.0), r(0.0),
    ];
    CMatrix::from_row_slice(4, 4, &entries)
}

/// A two-qubit unitary split along the exchange-symmetric / antisymmetric sectors.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetricBlock {
    /// `3 x 3` block on the symmetric (spin-1) sector.
    #[serde(with = "complex_matrix_serde")]
    pub sym: CMatrix,
    /// Scalar on the antisymmetric (singlet) sector.
    #[serde(serialize_with = "serialize_complex")]
    pub antisym: Complex64,
    /// Frobenius norm of the blocks coupling the two sectors.
    pub offdiag_norm: f64,
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn symmetric_block(u: &DenseUnitary) -> Result<SymmetricBlock> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4x4 two-qubit unitary".into(),
            found: format!("{0}x{0}", u.dim()),
        });
    }
    // re-validate: callers may hand in an unchecked matrix
    let u = DenseUnitary::new(u.matrix().clone())?;
    let b = symmetric_basis();
    let rotated = b.adjoint() * u.matrix() * &b;
    let sym = rotated.generic_view((0, 0), (Dyn(3), Dyn(3))).into_owned();
    let antisym = rotated[(3, 3)];
    let col = rotated.generic_view((0, 3), (Dyn(3), U1)).norm_squared();
    let row = rotated.generic_view((3, 0), (U1, Dyn(3))).norm_squared();
    Ok(SymmetricBlock { sym, antisym, offdiag_norm: (col + row).sqrt() })
}

/// The symmetric-sector block `R` of `H (x) H` and its action on the qutrit shift.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetricCounterexample {
    pub block: SymmetricBlock,
    /// `R X_3 R^dag`.
    #[serde(with = "complex_matrix_serde")]
    pub conjugated: CMatrix,
    /// `R X_3 R` (no dagger).
    #[serde(with = "complex_matrix_serde")]
    pub conjugated_undaggered: CMatrix,
    pub membership: Option<PhasedPauli>,
    pub membership_undaggered: Option<PhasedPauli>,
}

impl SymmetricCounterexample {
    /// `true` when `R` fails to normalize the qutrit Pauli group on `X_3`.
    pub fn refutes(&self) -> bool {
        self.block.offdiag_norm < 1e-12 && self.membership.is_none() && self.membership_undaggered.is_none()
    }
}

/// Builds `H (x) H`, extracts its symmetric block `R` and tests `R X_3 R^dag` for
/// membership in the qutrit Pauli group.
pub fn symmetric_counterexample() -> Result<SymmetricCounterexample> {
    let h = gate(GateKind::F, 2)?;
    let hh = h.kron(&h);
    let block = symmetric_block(&hh)?;
    let x3 = gate(GateKind::X, 3)?;
    let r = &block.sym;
    let conjugated = r * x3.matrix() * r.adjoint();
    let conjugated_undaggered = r * x3.matrix() * r;
    let membership = pauli_membership(&conjugated, 3, 1)?;
    let membership_undaggered = pauli_membership(&conjugated_undaggered, 3, 1)?;
    Ok(SymmetricCounterexample {
        block,
        conjugated,
        conjugated_undaggered,
        membership,
        membership_undaggered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit_algebra::max_abs_diff;

    fn real(rows: &[[f64; 3]; 3]) -> CMatrix {
        CMatrix::from_fn(3, 3, |r, c| Complex64::new(rows[r][c], 0.0))
    }

    #[test]
    fn hadamard_pair_block() {
        let h = gate(GateKind::F, 2).unwrap();
        let blk = symmetric_block(&h.kron(&h)).unwrap();
        let s = std::f64::consts::SQRT_2;
        let expected = real(&[[1.0, s, 1.0], [s, 0.0, -s], [1.0, -s, 1.0]]) * Complex64::new(0.5, 0.0);
        assert!(max_abs_diff(&blk.sym, &expected) < 1e-12);
        assert!((blk.antisym - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(blk.offdiag_norm < 1e-12);
    }

    #[test]
    fn identity_block() {
        let blk = symmetric_block(&DenseUnitary::identity(4)).unwrap();
        assert!(max_abs_diff(&blk.sym, &CMatrix::identity(3, 3)) < 1e-15);
        assert!((blk.antisym - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(blk.offdiag_norm < 1e-15);
    }

    #[test]
    fn cnot_couples_sectors() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::default();
        #[rustfmt::skip]
        let cnot = CMatrix::from_row_slice(4, 4, &[
            one, zero, zero, zero,
            zero, one, zero, zero,
            zero, zero, zero, one,
            zero, zero, one, zero,
        ]);
        let blk = symmetric_block(&DenseUnitary::new(cnot.clone()).unwrap()).unwrap();
        // oracle: explicit basis change with hand-written vectors
        let h = FRAC_1_SQRT_2;
        let anti = nalgebra::DVector::from_vec(vec![zero, one * h, -one * h, zero]);
        let sym01 = nalgebra::DVector::from_vec(vec![zero, one * h, one * h, zero]);
        let coupling = (anti.adjoint() * &cnot * sym01)[(0, 0)];
        assert!(coupling.norm() > 0.1);
        assert!(blk.offdiag_norm >= coupling.norm() - 1e-12);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = CMatrix::from_element(4, 4, Complex64::new(1.0, 0.0));
        let u = DenseUnitary::from_matrix_unchecked(m);
        assert!(matches!(symmetric_block(&u), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn counterexample_is_not_pauli() {
        let ce = symmetric_counterexample().unwrap();
        assert!(ce.membership.is_none());
        assert!(ce.membership_undaggered.is_none());
        assert!(ce.refutes());
    }
}
