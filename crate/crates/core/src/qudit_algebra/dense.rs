use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{complex_matrix_serde, CMatrix, UNITARY_TOL};
use crate::{Error, Result};

/// A `D x D` unitary matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DenseUnitaryRepr", into = "DenseUnitaryRepr")]
pub struct DenseUnitary {
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct DenseUnitaryRepr {
    dim: usize,
    #[serde(with = "complex_matrix_serde")]
    entries: CMatrix,
}

impl TryFrom<DenseUnitaryRepr> for DenseUnitary {
    type Error = Error;

    fn try_from(r: DenseUnitaryRepr) -> Result<Self> {
        if r.entries.nrows() != r.dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", r.dim),
                found: format!("{} rows", r.entries.nrows()),
            });
        }
        DenseUnitary::new(r.entries)
    }
}

impl From<DenseUnitary> for DenseUnitaryRepr {
    fn from(u: DenseUnitary) -> Self {
        DenseUnitaryRepr { dim: u.dim(), entries: u.matrix }
    }
}

impl DenseUnitary {
    /// Validates squareness and `|U^dag U - 1|_F <= 1e-10`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        let dev = unitarity_deviation(&matrix);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(DenseUnitary { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        DenseUnitary { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        DenseUnitary { matrix: CMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dagger(&self) -> DenseUnitary {
        DenseUnitary { matrix: self.matrix.adjoint() }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &DenseUnitary) -> Result<DenseUnitary> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("dimension {}", self.dim()),
                found: format!("dimension {}", rhs.dim()),
            });
        }
        Ok(DenseUnitary { matrix: &self.matrix * &rhs.matrix })
    }

    pub fn kron(&self, rhs: &DenseUnitary) -> DenseUnitary {
        DenseUnitary { matrix: self.matrix.kronecker(&rhs.matrix) }
    }

    /// `U A U^dag`.
    pub fn conjugate(&self, a: &CMatrix) -> CMatrix {
        &self.matrix * a * self.matrix.adjoint()
    }

    pub fn pow(&self, k: u32) -> DenseUnitary {
        let mut out = CMatrix::identity(self.dim(), self.dim());
        for _ in 0..k {
            out = &out * &self.matrix;
        }
        DenseUnitary { matrix: out }
    }
}

pub(crate) fn unitarity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - CMatrix::identity(n, n)).norm()
}

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state norm {norm} differs from 1")));
        }
        Ok(StateVector { amplitudes })
    }

    /// Computational basis state `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidState(format!("basis index {index} >= dimension {dim}")));
        }
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { matrix: self.projector() }
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityMatrix {
    #[serde(with = "complex_matrix_serde")]
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        let herm = (&matrix - matrix.adjoint()).norm();
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        DensityMatrix { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `tr(E rho)`, real part.
    pub fn expectation(&self, effect: &CMatrix) -> f64 {
        (effect * &self.matrix).trace().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let m = CMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(matches!(DenseUnitary::new(m), Err(Error::NotUnitary(_))));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(DenseUnitary::new(rect), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn density_validation() {
        let psi = StateVector::basis(3, 1).unwrap();
        assert!(DensityMatrix::new(psi.projector()).is_ok());
        let mut bad = psi.projector();
        bad[(0, 0)] = Complex64::new(-0.5, 0.0);
        bad[(1, 1)] = Complex64::new(1.5, 0.0);
        assert!(DensityMatrix::new(bad).is_err());
        assert!(StateVector::basis(3, 3).is_err());
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!(DensityMatrix::new(mixed.matrix().clone()).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let u = DenseUnitary::new(CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        ))
        .unwrap();
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, r#"{"dim":2,"entries":[[[0.0,0.0],[0.0,1.0]],[[1.0,0.0],[0.0,0.0]]]}"#);
        let back: DenseUnitary = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
    }
}
