use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qudit_algebra::{
    check_prime, pauli_membership, phase_modulus, DenseUnitary, PauliOperator,
};
use crate::{Error, Result};

/// A Clifford gate modulo global phase, stored by its conjugation action on the
/// Pauli generators `X_0..X_{n-1}, Z_0..Z_{n-1}`.
///
/// Column `k` of the `2n x 2n` matrix over `Z_d` is the symplectic vector of
/// `U g_k U^dag`; `phases[k]` is its phase exponent in `Z_{d}` (odd `d`) or `Z_{2d}`
/// (`d = 2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CliffordTableau {
    d: u32,
    n: usize,
    /// Row-major `2n x 2n`.
    matrix: Vec<u32>,
    phases: Vec<u32>,
}

impl CliffordTableau {
    pub fn identity(d: u32, n: usize) -> Result<Self> {
        check_prime(d)?;
        if n == 0 {
            return Err(Error::OutOfRange("at least one qudit is required".into()));
        }
        let m = 2 * n;
        let mut matrix = vec![0; m * m];
        for i in 0..m {
            matrix[i * m + i] = 1;
        }
        Ok(CliffordTableau { d, n, matrix, phases: vec![0; m] })
    }

    /// Builds a tableau from its symplectic matrix (row-major) and phase vector,
    /// checking the symplectic condition and that every generator image has order `d`.
    pub fn from_parts(d: u32, n: usize, matrix: Vec<u32>, phases: Vec<u32>) -> Result<Self> {
        check_prime(d)?;
        let m = 2 * n;
        if n == 0 || matrix.len() != m * m || phases.len() != m {
            return Err(Error::InvalidTableau(format!(
                "expected {m}x{m} matrix and {m} phases, got {} entries and {} phases",
                matrix.len(),
                phases.len()
            )));
        }
        let modulus = phase_modulus(d);
        let t = CliffordTableau {
            d,
            n,
            matrix: matrix.into_iter().map(|e| e % d).collect(),
            phases: phases.into_iter().map(|e| e % modulus).collect(),
        };
        if !t.is_symplectic() {
            return Err(Error::InvalidTableau(format!("matrix is not symplectic mod {d}\n{t}")));
        }
        for k in 0..m {
            let img = t.image(k);
            let p = img.pow(d);
            if !p.is_identity_up_to_phase() || p.phase() != 0 {
                return Err(Error::InvalidTableau(format!(
                    "image of generator {k} ({img}) does not have order {d}"
                )));
            }
        }
        Ok(t)
    }

    pub(crate) fn from_parts_unchecked(d: u32, n: usize, matrix: Vec<u32>, phases: Vec<u32>) -> Self {
        CliffordTableau { d, n, matrix, phases }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    /// Row-major symplectic matrix.
    pub fn matrix(&self) -> &[u32] {
        &self.matrix
    }

    pub fn phases(&self) -> &[u32] {
        &self.phases
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.matrix[row * 2 * self.n + col]
    }

    pub fn column(&self, col: usize) -> Vec<u32> {
        (0..2 * self.n).map(|r| self.entry(r, col)).collect()
    }

    /// `U g_k U^dag` as a Pauli operator.
    pub fn image(&self, k: usize) -> PauliOperator {
        let col = self.column(k);
        let (x, z) = col.split_at(self.n);
        PauliOperator::new(self.d, x.to_vec(), z.to_vec(), self.phases[k]).expect("valid image")
    }

    /// `M^T J M == J (mod d)` with `J = [[0, 1], [-1, 0]]`.
    pub fn is_symplectic(&self) -> bool {
        let m = 2 * self.n;
        let cols: Vec<Vec<u32>> = (0..m).map(|c| self.column(c)).collect();
        for i in 0..m {
            for j in 0..m {
                let expected = if i < self.n && j == i + self.n {
                    1
                } else if i >= self.n && j + self.n == i {
                    self.d - 1
                } else {
                    0
                };
                if symplectic_form(&cols[i], &cols[j], self.d) != expected {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        *self == CliffordTableau::identity(self.d, self.n).expect("validated")
    }

    fn check_shape(&self, d: u32, n: usize) -> Result<()> {
        if self.d != d || self.n != n {
            return Err(Error::DimensionMismatch {
                expected: format!("d={}, n={}", self.d, self.n),
                found: format!("d={d}, n={n}"),
            });
        }
        Ok(())
    }

    /// `U P U^dag` for the Clifford `U` represented by `self`.
    pub fn conjugate_pauli(&self, p: &PauliOperator) -> Result<PauliOperator> {
        self.check_shape(p.d(), p.num_qudits())?;
        let n = self.n;
        // P = w~^phi (prod X_i^{a_i}) (prod Z_i^{b_i}); conjugate factor by factor
        let mut out = PauliOperator::identity(self.d, n)?.with_phase(p.phase());
        for (k, &e) in p.x_exponents().iter().chain(p.z_exponents()).enumerate() {
            if e == 0 {
                continue;
            }
            let img = self.image(k);
            for _ in 0..e {
                out = out.mul(&img)?;
            }
        }
        Ok(out)
    }

    /// Clifford that applies `self` first and then `next` (`U_next U_self`).
    pub fn compose(&self, next: &CliffordTableau) -> Result<CliffordTableau> {
        next.check_shape(self.d, self.n)?;
        let m = 2 * self.n;
        let mut matrix = vec![0; m * m];
        let mut phases = vec![0; m];
        for k in 0..m {
            let img = next.conjugate_pauli(&self.image(k))?;
            for (r, v) in img.symplectic().into_iter().enumerate() {
                matrix[r * m + k] = v;
            }
            phases[k] = img.phase();
        }
        Ok(CliffordTableau { d: self.d, n: self.n, matrix, phases })
    }

    /// Inverse Clifford: `self.compose(&self.invert())` is the identity tableau.
    pub fn invert(&self) -> CliffordTableau {
        let n = self.n;
        let m = 2 * n;
        let d = self.d;
        let modulus = phase_modulus(d);
        // M^-1 = -J M^T J
        let inv_entry = |r: usize, c: usize| -> u32 {
            // (J M^T J)[r][c] = sum J[r][a] M[b][a] J[b][c]
            let (a, sa) = if r < n { (r + n, 1) } else { (r - n, d - 1) };
            let (b, sb) = if c < n { (c + n, d - 1) } else { (c - n, 1) };
            let v = (sa as u64 * sb as u64 % d as u64) * self.entry(b, a) as u64 % d as u64;
            ((d as u64 - v) % d as u64) as u32
        };
        let mut matrix = vec![0; m * m];
        for r in 0..m {
            for c in 0..m {
                matrix[r * m + c] = inv_entry(r, c);
            }
        }
        let mut phases = vec![0; m];
        for k in 0..m {
            let col: Vec<u32> = (0..m).map(|r| matrix[r * m + k]).collect();
            let (x, z) = col.split_at(n);
            let pre = PauliOperator::new(d, x.to_vec(), z.to_vec(), 0).expect("valid");
            let img = self.conjugate_pauli(&pre).expect("same shape");
            debug_assert_eq!(img.symplectic(), PauliOperator::generator(d, n, k).unwrap().symplectic());
            phases[k] = (modulus - img.phase()) % modulus;
        }
        CliffordTableau { d, n, matrix, phases }
    }

    /// Reads off the tableau of a dense Clifford unitary by conjugating each
    /// generator and testing Pauli membership.
    pub fn from_dense(u: &DenseUnitary, d: u32, n: usize) -> Result<CliffordTableau> {
        check_prime(d)?;
        let m = 2 * n;
        let modulus = phase_modulus(d) as f64;
        let mut matrix = vec![0; m * m];
        let mut phases = vec![0; m];
        for k in 0..m {
            let g = PauliOperator::generator(d, n, k)?.to_dense();
            if g.dim() != u.dim() {
                return Err(Error::DimensionMismatch {
                    expected: format!("dimension {}", g.dim()),
                    found: format!("dimension {}", u.dim()),
                });
            }
            let conj = u.conjugate(g.matrix());
            let member = pauli_membership(&conj, d, n)?.ok_or_else(|| {
                Error::InvalidTableau(format!("unitary maps generator {k} outside the Pauli group"))
            })?;
            let steps = member.theta * modulus / (2.0 * PI);
            if (steps - steps.round()).abs() > 1e-6 {
                return Err(Error::InvalidTableau(format!(
                    "image of generator {k} carries a phase outside the Pauli phase group"
                )));
            }
            phases[k] = (steps.round() as i64).rem_euclid(modulus as i64) as u32;
            for (r, v) in member.x.iter().chain(member.z.iter()).enumerate() {
                matrix[r * m + k] = *v;
            }
        }
        CliffordTableau::from_parts(d, n, matrix, phases)
    }

    /// Places an `m`-qudit tableau on `sites` of an `n`-qudit register.
    pub fn embed(&self, n: usize, sites: &[usize]) -> Result<CliffordTableau> {
        if sites.len() != self.n || sites.iter().any(|&s| s >= n) {
            return Err(Error::OutOfRange(format!("cannot embed {} qudits at {sites:?} in {n}", self.n)));
        }
        let mut out = CliffordTableau::identity(self.d, n)?;
        let big = 2 * n;
        let local = |k: usize| if k < self.n { sites[k] } else { n + sites[k - self.n] };
        for k in 0..2 * self.n {
            let gk = local(k);
            for r in 0..big {
                out.matrix[r * big + gk] = 0;
            }
            for r in 0..2 * self.n {
                out.matrix[local(r) * big + gk] = self.entry(r, k);
            }
            out.phases[gk] = self.phases[k];
        }
        Ok(out)
    }

    /// Dense unitary (canonical global phase) realising this tableau.
    pub fn to_dense(&self) -> Result<DenseUnitary> {
        super::synth::tableau_to_dense(self)
    }
}

impl fmt::Display for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = 2 * self.n;
        writeln!(f, "CliffordTableau(d={}, n={})", self.d, self.n)?;
        for r in 0..m {
            let row: Vec<String> = (0..m).map(|c| self.entry(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        write!(f, "  phases {:?}", self.phases)
    }
}

/// `<u, v> = x_u . z_v - z_u . x_v (mod d)` for symplectic vectors `(x | z)`.
pub fn symplectic_form(u: &[u32], v: &[u32], d: u32) -> u32 {
    let n = u.len() / 2;
    let d = d as u64;
    let mut acc = 0u64;
    for i in 0..n {
        acc += u[i] as u64 * v[n + i] as u64;
        acc += (d - u[n + i] as u64 % d) * v[i] as u64;
    }
    (acc % d) as u32
}

pub fn conjugate_pauli(t: &CliffordTableau, p: &PauliOperator) -> Result<PauliOperator> {
    t.conjugate_pauli(p)
}

pub fn compose(a: &CliffordTableau, b: &CliffordTableau) -> Result<CliffordTableau> {
    a.compose(b)
}

pub fn invert(a: &CliffordTableau) -> CliffordTableau {
    a.invert()
}
