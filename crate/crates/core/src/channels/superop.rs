use num_complex::Complex64;

use super::kraus::KrausChannel;
use crate::qudit_algebra::{CMatrix, DenseUnitary, DensityMatrix};
use crate::{Error, Result};

/// Linear map on `D x D` matrices as a `D^2 x D^2` matrix acting on column-stacked
/// vectors: `vec(rho)[i + D j] = rho[i, j]`, so `rho -> K rho K^dag` is `conj(K) ⊗ K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        let dd = dim * dim;
        if matrix.nrows() != dd || matrix.ncols() != dd {
            return Err(Error::DimensionMismatch {
                expected: format!("{dd}x{dd}"),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        Ok(Superoperator { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator { dim, matrix: CMatrix::identity(dim * dim, dim * dim) }
    }

    pub fn from_kraus(ch: &KrausChannel) -> Self {
        let d = ch.dim();
        let mut matrix = CMatrix::zeros(d * d, d * d);
        for k in ch.kraus() {
            matrix += k.conjugate().kronecker(k);
        }
        Superoperator { dim: d, matrix }
    }

    pub fn unitary(u: &DenseUnitary) -> Self {
        let m = u.matrix();
        Superoperator { dim: u.dim(), matrix: m.conjugate().kronecker(m) }
    }

    /// `p * id + (1 - p) * tr(.) 1/D`.
    pub fn depolarizing(p: f64, dim: usize) -> Self {
        let dd = dim * dim;
        let mut matrix = CMatrix::identity(dd, dd) * Complex64::new(p, 0.0);
        let w = Complex64::new((1.0 - p) / dim as f64, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                matrix[(i * (dim + 1), j * (dim + 1))] += w;
            }
        }
        Superoperator { dim, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply_matrix(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", self.dim),
                found: format!("{}x{}", rho.nrows(), rho.ncols()),
            });
        }
        let v = CMatrix::from_column_slice(self.dim * self.dim, 1, rho.as_slice());
        let out = &self.matrix * v;
        Ok(CMatrix::from_column_slice(self.dim, self.dim, out.as_slice()))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_matrix_unchecked(self.apply_matrix(rho.matrix())?))
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Superoperator) -> Result<Superoperator> {
        if self.dim != next.dim {
            return Err(Error::DimensionMismatch { expected: self.dim.to_string(), found: next.dim.to_string() });
        }
        Ok(Superoperator { dim: self.dim, matrix: &next.matrix * &self.matrix })
    }

    pub fn pow(&self, m: u32) -> Superoperator {
        let mut acc = Superoperator::identity(self.dim);
        for _ in 0..m {
            acc.matrix = &self.matrix * &acc.matrix;
        }
        acc
    }

    pub fn distance(&self, other: &Superoperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// Choi matrix `sum_ij |i><j| ⊗ Lambda(|i><j|)`.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let col = self.matrix.column(i + d * j);
                for r in 0..d {
                    for c in 0..d {
                        out[(i * d + r, j * d + c)] = col[r + d * c];
                    }
                }
            }
        }
        out
    }

    /// Kraus form from the Choi eigendecomposition; fails if the map is not CPTP.
    pub fn to_kraus(&self) -> Result<KrausChannel> {
        let d = self.dim;
        let choi = self.choi();
        let herm = (&choi - choi.adjoint()).norm();
        if herm > 1e-9 {
            return Err(Error::NotCptp(format!("Choi matrix not Hermitian ({herm:e})")));
        }
        let eig = choi.symmetric_eigen();
        let mut kraus = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda < -1e-9 {
                return Err(Error::NotCptp(format!("Choi eigenvalue {lambda:e} is negative")));
            }
            if lambda > 1e-14 {
                let v = eig.eigenvectors.column(k) * Complex64::new(lambda.sqrt(), 0.0);
                kraus.push(CMatrix::from_column_slice(d, d, v.as_slice()));
            }
        }
        KrausChannel::new(kraus)
    }
}

/// Returns `p` if `s` is within Frobenius distance `tol` of the depolarizing map
/// with parameter `p`, where `p` is read off the action on the traceless `|0><1|`.
pub fn is_depolarizing(s: &Superoperator, tol: f64) -> Option<f64> {
    let d = s.dim();
    if d < 2 {
        return None;
    }
    let p = s.matrix()[(d, d)].re;
    (s.distance(&Superoperator::depolarizing(p, d)) <= tol).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing;
    use crate::qudit_algebra::{gate, GateKind, StateVector};

    #[test]
    fn kraus_and_superoperator_agree() {
        let ch = depolarizing(0.4, 3).unwrap().then(&KrausChannel::unitary(&gate(GateKind::F, 3).unwrap())).unwrap();
        let s = ch.superoperator();
        for k in 0..3 {
            let rho = StateVector::basis(3, k).unwrap().density();
            let a = ch.apply_matrix(rho.matrix()).unwrap();
            let b = s.apply_matrix(rho.matrix()).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn depolarizing_superoperator_matches_kraus() {
        for (p, d) in [(0.7, 3), (0.0, 2), (1.0, 4), (-0.05, 3)] {
            let a = Superoperator::depolarizing(p, d);
            let b = depolarizing(p, d).unwrap().superoperator();
            assert!(a.distance(&b) < 1e-12);
        }
    }

    #[test]
    fn detects_depolarizing() {
        let s = depolarizing(0.7, 3).unwrap().superoperator();
        assert!((is_depolarizing(&s, 1e-9).unwrap() - 0.7).abs() < 1e-12);
        let rot = Superoperator::unitary(&gate(GateKind::F, 3).unwrap());
        assert!(is_depolarizing(&rot, 1e-6).is_none());
        assert_eq!(is_depolarizing(&Superoperator::identity(3), 1e-12), Some(1.0));
    }

    #[test]
    fn choi_round_trip() {
        let ch = depolarizing(0.25, 3).unwrap();
        let s = ch.superoperator();
        assert!((s.choi() - ch.choi()).norm() < 1e-12);
        let back = s.to_kraus().unwrap();
        assert!(back.superoperator().distance(&s) < 1e-10);
        // transpose is positive but not completely positive
        let mut t = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                t[(i + 2 * j, j + 2 * i)] = Complex64::new(1.0, 0.0);
            }
        }
        assert!(Superoperator::new(2, t).unwrap().to_kraus().is_err());
    }

    #[test]
    fn pow_composes() {
        let s = Superoperator::depolarizing(0.9, 3);
        assert!(s.pow(5).distance(&Superoperator::depolarizing(0.9f64.powi(5), 3)) < 1e-12);
        assert!(s.then(&s).unwrap().distance(&s.pow(2)) < 1e-15);
    }
}
