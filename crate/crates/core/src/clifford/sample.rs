use rand::Rng;

use super::tableau::{symplectic_form, CliffordTableau};
use crate::qudit_algebra::{check_prime, phase_modulus};
use crate::{Error, Result};

/// `|Sp(2n, Z_d)| = d^(n^2) prod_{i=1..n} (d^(2i) - 1)`.
pub fn symplectic_group_order(d: u32, n: usize) -> u128 {
    let d = d as u128;
    let mut order = d.pow((n * n) as u32);
    for i in 1..=n {
        order *= d.pow(2 * i as u32) - 1;
    }
    order
}

/// `|C_d^n| = d^(2n) |Sp(2n, Z_d)|`, the Clifford group order modulo global phase.
pub fn clifford_group_order(d: u32, n: usize) -> u128 {
    (d as u128).pow(2 * n as u32) * symplectic_group_order(d, n)
}

fn modinv(a: u32, d: u32) -> u32 {
    // d prime: a^(d-2)
    let mut result = 1u64;
    let mut base = a as u64 % d as u64;
    let mut e = d - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % d as u64;
        }
        base = base * base % d as u64;
        e >>= 1;
    }
    result as u32
}

fn axpy(acc: &mut [u32], coeff: u32, v: &[u32], d: u32) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = ((*a as u64 + coeff as u64 * x as u64) % d as u64) as u32;
    }
}

fn scale(v: &[u32], c: u32, d: u32) -> Vec<u32> {
    v.iter().map(|&x| (x as u64 * c as u64 % d as u64) as u32).collect()
}

fn combination(basis: &[Vec<u32>], coeffs: &[u32], d: u32) -> Vec<u32> {
    let mut out = vec![0; basis[0].len()];
    for (v, &c) in basis.iter().zip(coeffs) {
        axpy(&mut out, c, v, d);
    }
    out
}

/// `p - <p,y> x + <p,x> y`: projection onto the symplectic complement of a
/// hyperbolic pair `(x, y)` with `<x, y> = 1`.
fn project_out(p: &[u32], x: &[u32], y: &[u32], d: u32) -> Vec<u32> {
    let mut out = p.to_vec();
    let py = symplectic_form(p, y, d);
    let px = symplectic_form(p, x, d);
    axpy(&mut out, (d - py) % d, x, d);
    axpy(&mut out, px, y, d);
    out
}

/// Symplectic Gram-Schmidt: turns a spanning set of a nondegenerate subspace into a
/// list of hyperbolic pairs, flattened as `[x_0, y_0, x_1, y_1, ...]`.
fn hyperbolic_basis(mut pool: Vec<Vec<u32>>, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    pool.retain(|v| v.iter().any(|&e| e != 0));
    while let Some(x) = pool.first().cloned() {
        pool.remove(0);
        let j = pool
            .iter()
            .position(|p| symplectic_form(&x, p, d) != 0)
            .expect("nondegenerate subspace has a partner for every vector");
        let p = pool.remove(j);
        let y = scale(&p, modinv(symplectic_form(&x, &p, d), d), d);
        pool = pool
            .iter()
            .map(|p| project_out(p, &x, &y, d))
            .filter(|v| v.iter().any(|&e| e != 0))
            .collect();
        out.push(x);
        out.push(y);
    }
    out
}

/// Exactly uniform element of `Sp(2n, Z_d)` as a row-major `2n x 2n` matrix whose
/// column `i` (resp. `n+i`) is the image of `x_i` (resp. `z_i`).
///
/// Images are chosen pair by pair: a uniform nonzero vector `v` of the remaining
/// symplectic subspace (`d^(2m) - 1` choices), then a uniform `w` in that subspace with
/// `<v, w> = 1` (`d^(2m-1)` choices), then recursion on the complement.
pub fn random_symplectic<R: Rng + ?Sized>(d: u32, n: usize, rng: &mut R) -> Result<Vec<u32>> {
    check_prime(d)?;
    let m = 2 * n;
    let mut basis: Vec<Vec<u32>> = Vec::with_capacity(m);
    for i in 0..n {
        let mut x = vec![0; m];
        x[i] = 1;
        let mut z = vec![0; m];
        z[n + i] = 1;
        basis.push(x);
        basis.push(z);
    }
    let mut columns: Vec<Vec<u32>> = vec![Vec::new(); m];
    for i in 0..n {
        let v = loop {
            let c: Vec<u32> = (0..basis.len()).map(|_| rng.random_range(0..d)).collect();
            if c.iter().any(|&e| e != 0) {
                break combination(&basis, &c, d);
            }
        };
        let w = loop {
            let c: Vec<u32> = (0..basis.len()).map(|_| rng.random_range(0..d)).collect();
            let cand = combination(&basis, &c, d);
            let s = symplectic_form(&v, &cand, d);
            if s != 0 {
                break scale(&cand, modinv(s, d), d);
            }
        };
        let projected: Vec<Vec<u32>> = basis.iter().map(|b| project_out(b, &v, &w, d)).collect();
        basis = hyperbolic_basis(projected, d);
        debug_assert_eq!(basis.len(), 2 * (n - i - 1));
        columns[i] = v;
        columns[n + i] = w;
    }
    let mut matrix = vec![0; m * m];
    for (c, col) in columns.iter().enumerate() {
        for (r, &e) in col.iter().enumerate() {
            matrix[r * m + c] = e;
        }
    }
    Ok(matrix)
}

/// Uniformly random Clifford gate modulo global phase.
///
/// The symplectic part is uniform over `Sp(2n, Z_d)`; the phase vector is uniform over
/// the `d^(2n)` values compatible with it (for `d = 2`, each phase is fixed mod 2 by
/// the parity of its image and uniform over the remaining bit).
pub fn random_clifford<R: Rng + ?Sized>(d: u32, n: usize, rng: &mut R) -> Result<CliffordTableau> {
    check_prime(d)?;
    if n == 0 {
        return Err(Error::OutOfRange("at least one qudit is required".into()));
    }
    let matrix = random_symplectic(d, n, rng)?;
    let m = 2 * n;
    let modulus = phase_modulus(d);
    let phases = (0..m)
        .map(|k| {
            if d == 2 {
                let parity: u32 = (0..n).map(|i| matrix[i * m + k] * matrix[(n + i) * m + k]).sum::<u32>() % 2;
                (parity + 2 * rng.random_range(0..2)) % modulus
            } else {
                rng.random_range(0..d)
            }
        })
        .collect();
    Ok(CliffordTableau::from_parts_unchecked(d, n, matrix, phases))
}
