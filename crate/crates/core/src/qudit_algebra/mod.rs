//! Exact and dense representations of generalized Pauli operators, the Clifford
//! generator gates, quantum states, and the two-qubit symmetric-subspace block
//! decomposition.
//!
//! Conventions used throughout the crate:
//!
//! - Multi-qudit basis states `|s_0 s_1 ... s_{n-1}>` are indexed with site 0 as the
//!   most significant digit, `index = sum_k s_k d^(n-1-k)`.
//! - A Pauli operator is stored per site as `X^a Z^b` (X factor on the left) with a
//!   global phase `w~^phi`, where `w~ = w` for odd `d` and `w~ = w^(1/2)` for even `d`.
//!   The phase exponent therefore lives in `Z_d` (odd `d`) or `Z_2d` (even `d`).

mod dense;
mod gates;
mod pauli;
mod symmetric;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub use dense::{DenseUnitary, DensityMatrix, StateVector};
pub use gates::{cz_gate, embed_single, gate, GateKind};
pub use pauli::{pauli_group, pauli_membership, pauli_product, pauli_to_dense, PauliOperator, PhasedPauli};
pub use symmetric::{
    symmetric_basis, symmetric_block, symmetric_counterexample, SymmetricBlock,
    SymmetricCounterexample,
};

/// Dense complex matrix used for every numeric representation in the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Unitarity tolerance for [`DenseUnitary`] (Frobenius norm of `U^dag U - 1`).
pub const UNITARY_TOL: f64 = 1e-10;
/// Entrywise tolerance for Pauli membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// `w = exp(2 pi i / d)`.
pub fn root_of_unity(d: u32) -> Result<Complex64> {
    check_dimension(d)?;
    Ok(Complex64::from_polar(1.0, 2.0 * PI / d as f64))
}

/// `w^(1/2) = exp(pi i / d)`, the phase unit for even dimensions.
pub fn half_root_of_unity(d: u32) -> Result<Complex64> {
    check_dimension(d)?;
    Ok(Complex64::from_polar(1.0, PI / d as f64))
}

/// Modulus of the Pauli phase exponent: `d` for odd `d`, `2d` for even `d`.
pub fn phase_modulus(d: u32) -> u32 {
    if d % 2 == 1 {
        d
    } else {
        2 * d
    }
}

/// `exp(2 pi i k / m)` evaluated with `k` reduced modulo `m` first.
pub(crate) fn unit_phase(k: u64, m: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % m) as f64 / m as f64)
}

pub fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

pub(crate) fn check_dimension(d: u32) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

pub(crate) fn check_prime(d: u32) -> Result<()> {
    check_dimension(d)?;
    if is_prime(d) {
        Ok(())
    } else {
        Err(Error::NonPrimeDimension(d))
    }
}

/// `d^n` with overflow reported as a dimension error.
pub fn hilbert_dim(d: u32, n: usize) -> Result<usize> {
    check_dimension(d)?;
    let mut out: usize = 1;
    for _ in 0..n {
        out = out
            .checked_mul(d as usize)
            .ok_or_else(|| Error::OutOfRange(format!("{d}^{n} overflows")))?;
    }
    Ok(out)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Removes the global phase of `m`: the first entry (column-major scan) with modulus
/// above `1e-6` is rotated onto the positive real axis.
pub fn canonical_phase(m: &CMatrix) -> CMatrix {
    match m.iter().find(|z| z.norm() > 1e-6) {
        Some(z) => {
            let rot = z.conj() / z.norm();
            m * rot
        }
        None => m.clone(),
    }
}

/// Distance between `a` and `b` after optimally aligning their global phases:
/// `min_theta |a - e^{i theta} b|_F`.
pub fn phase_insensitive_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let rot = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    frobenius_distance(a, &(b * rot))
}

/// Serde adapter writing a complex matrix as row-major `[[re, im], ...]` rows.
pub mod complex_matrix_serde {
    use super::CMatrix;
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
        (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect()
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix, String> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err("ragged matrix rows".into());
        }
        Ok(CMatrix::from_fn(nrows, ncols, |r, c| {
            Complex64::new(rows[r][c][0], rows[r][c][1])
        }))
    }

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        from_rows(&rows).map_err(D::Error::custom)
    }
}
