use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_dimension, hilbert_dim, phase_modulus, unit_phase, CMatrix, DenseUnitary, MEMBERSHIP_TOL};
use crate::{Error, Result};

/// `w~^phase * (x) X^x[i] Z^z[i]` on `n` qudits of dimension `d`.
///
/// Exponents are kept reduced modulo `d`, the phase modulo [`phase_modulus`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOperator {
    d: u32,
    x: Vec<u32>,
    z: Vec<u32>,
    phase: u32,
}

impl PauliOperator {
    pub fn new(d: u32, x: Vec<u32>, z: Vec<u32>, phase: u32) -> Result<Self> {
        check_dimension(d)?;
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} Z exponents", x.len()),
                found: format!("{}", z.len()),
            });
        }
        let x = x.into_iter().map(|a| a % d).collect();
        let z = z.into_iter().map(|b| b % d).collect();
        Ok(PauliOperator { d, x, z, phase: phase % phase_modulus(d) })
    }

    pub fn identity(d: u32, n: usize) -> Result<Self> {
        Self::new(d, vec![0; n], vec![0; n], 0)
    }

    /// `X` on `site`, identity elsewhere.
    pub fn x_on(d: u32, n: usize, site: usize) -> Result<Self> {
        let mut x = vec![0; n];
        x[site] = 1;
        Self::new(d, x, vec![0; n], 0)
    }

    /// `Z` on `site`, identity elsewhere.
    pub fn z_on(d: u32, n: usize, site: usize) -> Result<Self> {
        let mut z = vec![0; n];
        z[site] = 1;
        Self::new(d, vec![0; n], z, 0)
    }

    /// Generator `k` in the order `X_0..X_{n-1}, Z_0..Z_{n-1}`.
    pub fn generator(d: u32, n: usize, k: usize) -> Result<Self> {
        if k < n {
            Self::x_on(d, n, k)
        } else {
            Self::z_on(d, n, k - n)
        }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.x.len()
    }

    pub fn x_exponents(&self) -> &[u32] {
        &self.x
    }

    pub fn z_exponents(&self) -> &[u32] {
        &self.z
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn with_phase(&self, phase: u32) -> Self {
        let mut out = self.clone();
        out.phase = phase % phase_modulus(self.d);
        out
    }

    /// Symplectic vector `(x | z)`.
    pub fn symplectic(&self) -> Vec<u32> {
        self.x.iter().chain(self.z.iter()).copied().collect()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&e| e == 0)
    }

    /// Exact product `self * rhs`.
    pub fn mul(&self, rhs: &PauliOperator) -> Result<PauliOperator> {
        if self.d != rhs.d || self.num_qudits() != rhs.num_qudits() {
            return Err(Error::DimensionMismatch {
                expected: format!("d={}, n={}", self.d, self.num_qudits()),
                found: format!("d={}, n={}", rhs.d, rhs.num_qudits()),
            });
        }
        let d = self.d as u64;
        let modulus = phase_modulus(self.d) as u64;
        let step = modulus / d;
        // X^a Z^b X^a' Z^b' = w^(b.a') X^(a+a') Z^(b+b')
        let cross: u64 = self.z.iter().zip(&rhs.x).map(|(&b, &a)| (b as u64 * a as u64) % d).sum();
        let phase = (self.phase as u64 + rhs.phase as u64 + step * (cross % d)) % modulus;
        let x = self.x.iter().zip(&rhs.x).map(|(&a, &b)| (a + b) % self.d).collect();
        let z = self.z.iter().zip(&rhs.z).map(|(&a, &b)| (a + b) % self.d).collect();
        Ok(PauliOperator { d: self.d, x, z, phase: phase as u32 })
    }

    pub fn pow(&self, k: u32) -> PauliOperator {
        let mut out = PauliOperator::identity(self.d, self.num_qudits()).expect("valid dimension");
        for _ in 0..k {
            out = out.mul(self).expect("same shape");
        }
        out
    }

    /// Symplectic form `<u, v> = x_u . z_v - z_u . x_v (mod d)`; `rhs * self = w^<self,rhs> self * rhs`.
    pub fn symplectic_product(&self, rhs: &PauliOperator) -> u32 {
        let d = self.d as u64;
        let mut acc = 0u64;
        for i in 0..self.num_qudits() {
            acc += self.x[i] as u64 * rhs.z[i] as u64;
            acc += (d - self.z[i] as u64) * rhs.x[i] as u64;
        }
        (acc % d) as u32
    }

    pub fn to_dense(&self) -> DenseUnitary {
        pauli_to_dense(self)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w~^{}", self.phase)?;
        for (a, b) in self.x.iter().zip(&self.z) {
            write!(f, " X^{a}Z^{b}")?;
        }
        Ok(())
    }
}

/// All `d^(2n)` Pauli operators `X^a Z^b` with zero phase, ordered by the symplectic
/// vector `(a | b)` read as a base-`d` number.
pub fn pauli_group(d: u32, n: usize) -> Result<Vec<PauliOperator>> {
    check_dimension(d)?;
    let m = 2 * n;
    let total = (d as usize)
        .checked_pow(m as u32)
        .ok_or_else(|| Error::OutOfRange(format!("{d}^{m} overflows")))?;
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0u32; m];
            for slot in v.iter_mut().rev() {
                *slot = (idx % d as usize) as u32;
                idx /= d as usize;
            }
            let z = v.split_off(n);
            PauliOperator::new(d, v, z, 0)
        })
        .collect()
}

pub fn pauli_product(p: &PauliOperator, q: &PauliOperator) -> Result<PauliOperator> {
    p.mul(q)
}

pub fn pauli_to_dense(p: &PauliOperator) -> DenseUnitary {
    let d = p.d as usize;
    let n = p.num_qudits();
    let dim = d.pow(n as u32);
    let modulus = phase_modulus(p.d) as u64;
    let step = modulus / p.d as u64;
    let mut m = CMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; n];
    for col in 0..dim {
        let mut rest = col;
        for k in (0..n).rev() {
            digits[k] = rest % d;
            rest /= d;
        }
        let mut row = 0usize;
        let mut e = p.phase as u64;
        for k in 0..n {
            row = row * d + (digits[k] + p.x[k] as usize) % d;
            e += step * (p.z[k] as u64 * digits[k] as u64);
        }
        m[(row, col)] = unit_phase(e, modulus);
    }
    DenseUnitary::from_matrix_unchecked(m)
}

/// A Pauli operator with an arbitrary real global phase, `e^{i theta} (x) X^x Z^z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhasedPauli {
    pub d: u32,
    pub x: Vec<u32>,
    pub z: Vec<u32>,
    /// Global phase angle in `(-pi, pi]`.
    pub theta: f64,
}

impl PhasedPauli {
    pub fn operator(&self) -> PauliOperator {
        PauliOperator::new(self.d, self.x.clone(), self.z.clone(), 0).expect("valid exponents")
    }
}

/// Decides whether `u` equals `e^{i theta} (x) X^a Z^b` entrywise within `1e-9`.
pub fn pauli_membership(u: &CMatrix, d: u32, n: usize) -> Result<Option<PhasedPauli>> {
    let dim = hilbert_dim(d, n)?;
    if !u.is_square() || u.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: format!("{dim}x{dim}"),
            found: format!("{}x{}", u.nrows(), u.ncols()),
        });
    }
    let du = d as usize;
    // X^a Z^b |0> = |a>: column 0 locates the shift
    let (row0, amp0) = (0..dim)
        .map(|r| (r, u[(r, 0)]))
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty");
    if (amp0.norm() - 1.0).abs() > MEMBERSHIP_TOL {
        return Ok(None);
    }
    let theta = amp0.arg();
    let mut x = vec![0u32; n];
    let mut rest = row0;
    for k in (0..n).rev() {
        x[k] = (rest % du) as u32;
        rest /= du;
    }
    let mut z = vec![0u32; n];
    let unphase = Complex64::from_polar(1.0, -theta);
    for k in 0..n {
        let col = du.pow((n - 1 - k) as u32);
        // |e_k> maps to |a + e_k>
        let mut row = 0usize;
        for j in 0..n {
            let s = if j == k { 1 } else { 0 };
            row = row * du + (x[j] as usize + s) % du;
        }
        let c = u[(row, col)] * unphase;
        let turns = c.arg() * d as f64 / (2.0 * PI);
        z[k] = (turns.round() as i64).rem_euclid(d as i64) as u32;
    }
    let candidate = PauliOperator::new(d, x.clone(), z.clone(), 0)?.to_dense();
    let scaled = candidate.matrix() * Complex64::from_polar(1.0, theta);
    let dev = super::max_abs_diff(u, &scaled);
    if dev > MEMBERSHIP_TOL {
        return Ok(None);
    }
    Ok(Some(PhasedPauli { d, x, z, theta }))
}
