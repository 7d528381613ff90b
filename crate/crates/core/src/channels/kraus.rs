use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::superop::Superoperator;
use crate::qudit_algebra::{complex_matrix_serde, CMatrix, DenseUnitary, DensityMatrix};
use crate::{Error, Result};

/// Tolerance on `|sum K^dag K - 1|_F` for a channel to count as trace preserving.
pub const CPTP_TOL: f64 = 1e-9;

/// A completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KrausRepr", into = "KrausRepr")]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct KrausRepr {
    dim: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl TryFrom<KrausRepr> for KrausChannel {
    type Error = Error;

    fn try_from(r: KrausRepr) -> Result<Self> {
        let kraus = r
            .kraus
            .iter()
            .map(|rows| complex_matrix_serde::from_rows(rows).map_err(Error::NotCptp))
            .collect::<Result<Vec<_>>>()?;
        let ch = KrausChannel::new(kraus)?;
        if ch.dim != r.dim {
            return Err(Error::DimensionMismatch { expected: r.dim.to_string(), found: ch.dim.to_string() });
        }
        Ok(ch)
    }
}

impl From<KrausChannel> for KrausRepr {
    fn from(ch: KrausChannel) -> Self {
        KrausRepr { dim: ch.dim, kraus: ch.kraus.iter().map(complex_matrix_serde::to_rows).collect() }
    }
}

fn tp_deviation(kraus: &[CMatrix], dim: usize) -> f64 {
    let mut acc = CMatrix::zeros(dim, dim);
    for k in kraus {
        acc += k.adjoint() * k;
    }
    (acc - CMatrix::identity(dim, dim)).norm()
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let dim = kraus
            .first()
            .ok_or_else(|| Error::NotCptp("empty Kraus list".into()))?
            .nrows();
        if let Some(k) = kraus.iter().find(|k| k.nrows() != dim || k.ncols() != dim) {
            return Err(Error::DimensionMismatch {
                expected: format!("{dim}x{dim}"),
                found: format!("{}x{}", k.nrows(), k.ncols()),
            });
        }
        let dev = tp_deviation(&kraus, dim);
        if !(dev <= CPTP_TOL) {
            return Err(Error::NotCptp(format!("|sum K^dag K - 1|_F = {dev:e}")));
        }
        Ok(KrausChannel { dim, kraus })
    }

    pub(crate) fn from_kraus_unchecked(dim: usize, kraus: Vec<CMatrix>) -> Self {
        KrausChannel { dim, kraus }
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel { dim, kraus: vec![CMatrix::identity(dim, dim)] }
    }

    pub fn unitary(u: &DenseUnitary) -> Self {
        KrausChannel { dim: u.dim(), kraus: vec![u.matrix().clone()] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim.to_string(), found: dim.to_string() });
        }
        Ok(())
    }

    /// `sum_k K rho K^dag` on an arbitrary matrix.
    pub fn apply_matrix(&self, rho: &CMatrix) -> Result<CMatrix> {
        self.check_dim(rho.nrows())?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        Ok(out)
    }

    /// Heisenberg-picture action `sum_k K^dag E K`.
    pub fn adjoint_apply(&self, effect: &CMatrix) -> Result<CMatrix> {
        self.check_dim(effect.nrows())?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += k.adjoint() * effect * k;
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_matrix_unchecked(self.apply_matrix(rho.matrix())?))
    }

    /// Channel applying `self` first and `next` second. Kraus operators are all
    /// products `B A`, without rank truncation.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel> {
        self.check_dim(next.dim)?;
        let kraus = next
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        Ok(KrausChannel { dim: self.dim, kraus })
    }

    /// `self ⊗ other` on the joint space, `self` on the leading factor.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.kronecker(b)))
            .collect();
        KrausChannel { dim: self.dim * other.dim, kraus }
    }

    pub fn superoperator(&self) -> Superoperator {
        Superoperator::from_kraus(self)
    }

    /// `sum_ij |i><j| ⊗ Lambda(|i><j|)`.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d * d, d * d);
        for k in &self.kraus {
            let v = CMatrix::from_column_slice(d * d, 1, k.as_slice());
            out += &v * v.adjoint();
        }
        out
    }

    /// Closed-form Haar-averaged fidelity `(D + sum |tr K|^2) / (D (D + 1))`.
    pub fn average_fidelity(&self) -> f64 {
        let d = self.dim as f64;
        let s: f64 = self.kraus.iter().map(|k| k.trace().norm_sqr()).sum();
        (d + s) / (d * (d + 1.0))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub fn average_fidelity(ch: &KrausChannel) -> f64 {
    ch.average_fidelity()
}

pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

/// `first` followed by `second`.
pub fn compose_channels(first: &KrausChannel, second: &KrausChannel) -> Result<KrausChannel> {
    first.then(second)
}

/// Shift and clock operators `X^a Z^b` of an arbitrary dimension `D`.
pub fn weyl_operator(dim: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for s in 0..dim {
        let angle = 2.0 * std::f64::consts::PI * ((b * s) % dim) as f64 / dim as f64;
        m[((s + a) % dim, s)] = Complex64::from_polar(1.0, angle);
    }
    m
}

/// `rho -> p rho + (1 - p) tr(rho) 1/D`, valid for `-1/(D^2 - 1) <= p <= 1`.
pub fn depolarizing(p: f64, dim: usize) -> Result<KrausChannel> {
    if dim < 2 {
        return Err(Error::OutOfRange(format!("depolarizing channel needs D >= 2, got {dim}")));
    }
    let d2 = (dim * dim) as f64;
    let lower = -1.0 / (d2 - 1.0);
    if !(p >= lower - 1e-15 && p <= 1.0 + 1e-15) {
        return Err(Error::OutOfRange(format!("p = {p} outside the completely positive range [{lower}, 1]")));
    }
    let w_id = ((1.0 + p * (d2 - 1.0)) / d2).max(0.0);
    let w_other = ((1.0 - p) / d2).max(0.0);
    let mut kraus = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            let w = if a == 0 && b == 0 { w_id } else { w_other };
            if w > 0.0 {
                kraus.push(weyl_operator(dim, a, b) * Complex64::new(w.sqrt(), 0.0));
            }
        }
    }
    Ok(KrausChannel { dim, kraus })
}
