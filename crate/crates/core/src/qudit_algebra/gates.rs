use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{check_dimension, hilbert_dim, unit_phase, CMatrix, DenseUnitary};
use crate::{Error, Result};

/// Named single- and two-qudit gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// Shift `|s> -> |s+1>`.
    X,
    /// Clock `|s> -> w^s |s>`.
    Z,
    /// Quantum Fourier transform.
    F,
    /// Phase gate `|s> -> w^(s(s+rho)/2) |s>`, `rho = 1` for odd `d`, `0` otherwise.
    P,
    /// Two-qudit controlled-Z `|s s'> -> w^(s s') |s s'>`.
    CZ,
    /// Generalized T gate `|s> -> w^(s^3/d^2) |s>`; not a Clifford gate.
    T,
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "X" => Ok(GateKind::X),
            "Z" => Ok(GateKind::Z),
            "F" => Ok(GateKind::F),
            "P" | "S" => Ok(GateKind::P),
            "CZ" => Ok(GateKind::CZ),
            "T" => Ok(GateKind::T),
            _ => Err(Error::UnknownGate(s.to_string())),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::F => "F",
            GateKind::P => "P",
            GateKind::CZ => "CZ",
            GateKind::T => "T",
        };
        f.write_str(s)
    }
}

/// Dense matrix of a named gate for qudit dimension `d` (`d^2 x d^2` for `CZ`).
pub fn gate(kind: GateKind, d: u32) -> Result<DenseUnitary> {
    check_dimension(d)?;
    let du = d as usize;
    let dd = d as u64;
    let m = match kind {
        GateKind::X => {
            CMatrix::from_fn(du, du, |r, c| one_if(r == (c + 1) % du))
        }
        GateKind::Z => CMatrix::from_fn(du, du, |r, c| {
            if r == c {
                unit_phase(r as u64, dd)
            } else {
                Complex64::default()
            }
        }),
        GateKind::F => {
            let norm = 1.0 / (d as f64).sqrt();
            CMatrix::from_fn(du, du, |r, c| unit_phase((r * c) as u64, dd) * norm)
        }
        GateKind::P => {
            let rho = (d % 2) as u64;
            // w^(k/2) = exp(2 pi i k / 2d), with k = s(s+rho) exact
            CMatrix::from_fn(du, du, |r, c| {
                if r == c {
                    let s = r as u64;
                    unit_phase(s * (s + rho), 2 * dd)
                } else {
                    Complex64::default()
                }
            })
        }
        GateKind::CZ => return cz_gate(d, 2, 0, 1, 1),
        GateKind::T => CMatrix::from_fn(du, du, |r, c| {
            if r == c {
                let s = r as f64;
                let df = d as f64;
                Complex64::from_polar(1.0, 2.0 * PI * s.powi(3) / (df * df * df))
            } else {
                Complex64::default()
            }
        }),
    };
    Ok(DenseUnitary::from_matrix_unchecked(m))
}

fn one_if(b: bool) -> Complex64 {
    if b {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::default()
    }
}

/// `1 (x) ... (x) g (x) ... (x) 1` with `g` acting on `site` of `n` qudits.
pub fn embed_single(g: &DenseUnitary, d: u32, n: usize, site: usize) -> Result<DenseUnitary> {
    if g.dim() != d as usize {
        return Err(Error::DimensionMismatch {
            expected: format!("single-qudit gate of dimension {d}"),
            found: format!("dimension {}", g.dim()),
        });
    }
    if site >= n {
        return Err(Error::OutOfRange(format!("site {site} outside {n} qudits")));
    }
    let left = hilbert_dim(d, site)?;
    let right = hilbert_dim(d, n - site - 1)?;
    let m = CMatrix::identity(left, left)
        .kronecker(g.matrix())
        .kronecker(&CMatrix::identity(right, right));
    Ok(DenseUnitary::from_matrix_unchecked(m))
}

/// `CZ^power` between sites `a` and `b` of `n` qudits.
pub fn cz_gate(d: u32, n: usize, a: usize, b: usize, power: u32) -> Result<DenseUnitary> {
    check_dimension(d)?;
    if a >= n || b >= n || a == b {
        return Err(Error::OutOfRange(format!("CZ sites ({a}, {b}) invalid for {n} qudits")));
    }
    let dim = hilbert_dim(d, n)?;
    let du = d as usize;
    let digit = |index: usize, site: usize| (index / du.pow((n - 1 - site) as u32)) % du;
    let m = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            let e = (digit(r, a) * digit(r, b)) as u64 * power as u64;
            unit_phase(e, d as u64)
        } else {
            Complex64::default()
        }
    });
    Ok(DenseUnitary::from_matrix_unchecked(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit_algebra::{max_abs_diff, root_of_unity};

    const PRIMES: [u32; 4] = [2, 3, 5, 7];

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_acts_on_basis() {
        let x = gate(GateKind::X, 3).unwrap();
        // column s holds X|s>
        assert_eq!(x.matrix()[(1, 0)], c(1.0, 0.0));
        assert_eq!(x.matrix()[(0, 2)], c(1.0, 0.0));
        assert_eq!(x.matrix()[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn fourier_at_d2_is_hadamard() {
        let f = gate(GateKind::F, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]);
        assert!(max_abs_diff(f.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn qutrit_phase_gate() {
        let p = gate(GateKind::P, 3).unwrap();
        let w = root_of_unity(3).unwrap();
        let expected = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), w, c(1.0, 0.0)]));
        assert!(max_abs_diff(p.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn qubit_phase_gate_is_s() {
        let p = gate(GateKind::P, 2).unwrap();
        assert!((p.matrix()[(1, 1)] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn qutrit_cz() {
        let cz = gate(GateKind::CZ, 3).unwrap();
        let w = root_of_unity(3).unwrap();
        // |12> has index 1*3 + 2 = 5 and picks up w^2
        assert!((cz.matrix()[(5, 5)] - w * w).norm() < 1e-14);
        assert_eq!(cz.dim(), 9);
    }

    #[test]
    fn all_gates_unitary() {
        for d in PRIMES {
            for kind in [GateKind::X, GateKind::Z, GateKind::F, GateKind::P, GateKind::CZ, GateKind::T] {
                let g = gate(kind, d).unwrap();
                assert!(DenseUnitary::new(g.matrix().clone()).is_ok(), "{kind} d={d}");
                let dev = super::super::dense::unitarity_deviation(g.matrix());
                assert!(dev < 1e-12, "{kind} d={d}: {dev}");
            }
        }
    }

    #[test]
    fn shift_and_clock_have_order_d() {
        for d in PRIMES {
            let id = CMatrix::identity(d as usize, d as usize);
            let x = gate(GateKind::X, d).unwrap();
            let z = gate(GateKind::Z, d).unwrap();
            assert!(max_abs_diff(x.pow(d).matrix(), &id) < 1e-10);
            assert!(max_abs_diff(z.pow(d).matrix(), &id) < 1e-10);
        }
    }

    #[test]
    fn clock_shift_commutation() {
        for d in PRIMES {
            let x = gate(GateKind::X, d).unwrap();
            let z = gate(GateKind::Z, d).unwrap();
            let w = root_of_unity(d).unwrap();
            let zx = z.matrix() * x.matrix();
            let xz = x.matrix() * z.matrix() * w;
            assert!(max_abs_diff(&zx, &xz) < 1e-12, "d={d}");
        }
    }

    #[test]
    fn unknown_kind() {
        assert!(matches!("Y".parse::<GateKind>(), Err(Error::UnknownGate(_))));
        assert_eq!("cz".parse::<GateKind>().unwrap(), GateKind::CZ);
    }

    #[test]
    fn embedding_matches_kron() {
        let f = gate(GateKind::F, 3).unwrap();
        let e = embed_single(&f, 3, 2, 1).unwrap();
        let expected = CMatrix::identity(3, 3).kronecker(f.matrix());
        assert!(max_abs_diff(e.matrix(), &expected) < 1e-15);
        let cz = cz_gate(3, 2, 1, 0, 1).unwrap();
        assert!(max_abs_diff(cz.matrix(), gate(GateKind::CZ, 3).unwrap().matrix()) < 1e-15);
    }
}
