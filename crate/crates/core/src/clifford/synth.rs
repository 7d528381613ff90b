//! Dense synthesis of a tableau as a word in `{CZ, F, P}` followed by a Pauli
//! correction `X^a Z^b`.
//!
//! The symplectic part is reduced to the identity qudit by qudit. For qudit `j`
//! the image of `X_j` is first cleared on every other qudit with local `SL(2, Z_d)`
//! moves and `CZ` powers, then the image of `Z_j` is cleared with `CZ` powers that fix
//! `Z_j`, and a final local move restores the pair `(X_j, Z_j)`. What is left has
//! identity symplectic part, i.e. a Pauli.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use super::tableau::CliffordTableau;
use crate::qudit_algebra::{
    canonical_phase, cz_gate, embed_single, gate, max_abs_diff, phase_modulus, DenseUnitary, GateKind,
    PauliOperator, MEMBERSHIP_TOL,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Local {
    F,
    P,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Local(usize, Local),
    Cz(usize, usize, u32),
}

/// 2x2 matrix over `Z_d`, row-major; columns are the images of `x` and `z`.
type Mat2 = [u32; 4];

struct Generators {
    d: u32,
    f: CliffordTableau,
    p: CliffordTableau,
    /// `CZ^c` for `c` in `0..d`.
    cz_pow: Vec<CliffordTableau>,
    f_dense: DenseUnitary,
    p_dense: DenseUnitary,
    /// Every element of `SL(2, Z_d)` with a shortest word in `{F, P}`.
    local_words: Vec<(Mat2, Vec<Local>)>,
}

fn mat_of(t: &CliffordTableau) -> Mat2 {
    [t.entry(0, 0), t.entry(0, 1), t.entry(1, 0), t.entry(1, 1)]
}

fn mat_mul(a: &Mat2, b: &Mat2, d: u32) -> Mat2 {
    let m = |x: u32, y: u32| x as u64 * y as u64;
    let d = d as u64;
    [
        ((m(a[0], b[0]) + m(a[1], b[2])) % d) as u32,
        ((m(a[0], b[1]) + m(a[1], b[3])) % d) as u32,
        ((m(a[2], b[0]) + m(a[3], b[2])) % d) as u32,
        ((m(a[2], b[1]) + m(a[3], b[3])) % d) as u32,
    ]
}

fn mat_vec(a: &Mat2, u: (u32, u32), d: u32) -> (u32, u32) {
    let d = d as u64;
    (
        ((a[0] as u64 * u.0 as u64 + a[1] as u64 * u.1 as u64) % d) as u32,
        ((a[2] as u64 * u.0 as u64 + a[3] as u64 * u.1 as u64) % d) as u32,
    )
}

impl Generators {
    fn build(d: u32) -> Result<Self> {
        let f_dense = gate(GateKind::F, d)?;
        let p_dense = gate(GateKind::P, d)?;
        let f = CliffordTableau::from_dense(&f_dense, d, 1)?;
        let p = CliffordTableau::from_dense(&p_dense, d, 1)?;
        let cz_pow = (0..d)
            .map(|c| CliffordTableau::from_dense(&cz_gate(d, 2, 0, 1, c)?, d, 2))
            .collect::<Result<Vec<_>>>()?;

        let gens = [(Local::F, mat_of(&f)), (Local::P, mat_of(&p))];
        let mut seen: HashMap<Mat2, usize> = HashMap::new();
        let mut local_words = vec![([1, 0, 0, 1], Vec::new())];
        seen.insert([1, 0, 0, 1], 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (g, gm) in &gens {
                // apply g after the word
                let next = mat_mul(gm, &local_words[i].0, d);
                if !seen.contains_key(&next) {
                    let mut word = local_words[i].1.clone();
                    word.push(*g);
                    seen.insert(next, local_words.len());
                    queue.push_back(local_words.len());
                    local_words.push((next, word));
                }
            }
        }
        let expected = (d as usize) * (d as usize * d as usize - 1);
        if local_words.len() != expected {
            return Err(Error::SynthesisFailure(format!(
                "F and P generate {} local symplectic maps, expected {expected}",
                local_words.len()
            )));
        }
        Ok(Generators { d, f, p, cz_pow, f_dense, p_dense, local_words })
    }

    fn get(d: u32) -> Result<Arc<Generators>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Generators>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().expect("poisoned").get(&d) {
            return Ok(g.clone());
        }
        let built = Arc::new(Generators::build(d)?);
        cache.lock().expect("poisoned").entry(d).or_insert_with(|| built.clone());
        Ok(built)
    }

    /// Shortest local word whose symplectic matrix sends `u` to `target`.
    fn word_sending(&self, u: (u32, u32), target: (u32, u32)) -> &[Local] {
        &self
            .local_words
            .iter()
            .find(|(m, _)| mat_vec(m, u, self.d) == target)
            .expect("SL(2, Z_d) is transitive on nonzero vectors")
            .1
    }

    fn word_for(&self, m: &Mat2) -> &[Local] {
        &self.local_words.iter().find(|(w, _)| w == m).expect("complete table").1
    }
}

struct Reducer<'a> {
    gens: &'a Generators,
    n: usize,
    cur: CliffordTableau,
    ops: Vec<Op>,
}

impl Reducer<'_> {
    fn local(&self, col: usize, site: usize) -> (u32, u32) {
        (self.cur.entry(site, col), self.cur.entry(self.n + site, col))
    }

    fn apply_word(&mut self, site: usize, word: &[Local]) -> Result<()> {
        for &g in word {
            let t = match g {
                Local::F => &self.gens.f,
                Local::P => &self.gens.p,
            };
            self.cur = self.cur.compose(&t.embed(self.n, &[site])?)?;
            self.ops.push(Op::Local(site, g));
        }
        Ok(())
    }

    fn send(&mut self, col: usize, site: usize, target: (u32, u32)) -> Result<()> {
        let u = self.local(col, site);
        let word = self.gens.word_sending(u, target).to_vec();
        self.apply_word(site, &word)
    }

    fn apply_cz(&mut self, a: usize, b: usize, power: u32) -> Result<()> {
        let power = power % self.gens.d;
        if power == 0 {
            return Ok(());
        }
        let t = self.gens.cz_pow[power as usize].embed(self.n, &[a, b])?;
        self.cur = self.cur.compose(&t)?;
        self.ops.push(Op::Cz(a, b, power));
        Ok(())
    }

    fn reduce_qudit(&mut self, j: usize) -> Result<()> {
        let n = self.n;
        let d = self.gens.d;
        let zero = (0, 0);
        // image of X_j -> e_{x_j}
        if self.local(j, j) == zero {
            let k = (j + 1..n)
                .find(|&k| self.local(j, k) != zero)
                .ok_or_else(|| Error::SynthesisFailure(format!("image of X_{j} vanishes")))?;
            self.send(j, k, (1, 0))?;
            self.apply_cz(j, k, 1)?;
        }
        self.send(j, j, (1, 0))?;
        for k in j + 1..n {
            if self.local(j, k) != zero {
                self.send(j, k, (0, 1))?;
                self.apply_cz(j, k, d - 1)?;
            }
        }
        // X_j -> Z_j, then clear the image of Z_j with CZ powers (CZ fixes Z_j)
        self.send(j, j, (0, 1))?;
        let zc = n + j;
        for k in j + 1..n {
            if self.local(zc, k) != zero {
                self.send(zc, k, (0, 1))?;
                // b_k += c * a_j with a_j = -1
                self.apply_cz(j, k, 1)?;
            }
        }
        let v = self.local(j, j);
        let w = self.local(zc, j);
        // S [v w] = 1  =>  S = [v w]^-1 = [[w1, -w0], [-v1, v0]] (det 1)
        let neg = |x: u32| (d - x) % d;
        let s = [w.1, neg(w.0), neg(v.1), v.0];
        let word = self.gens.word_for(&s).to_vec();
        self.apply_word(j, &word)
    }
}

/// Dense unitary of a tableau, with the global phase fixed so that the first nonzero
/// entry (column-major) is real and positive.
pub fn tableau_to_dense(t: &CliffordTableau) -> Result<DenseUnitary> {
    let d = t.d();
    let n = t.num_qudits();
    let gens = Generators::get(d)?;
    let mut red = Reducer { gens: &gens, n, cur: t.clone(), ops: Vec::new() };
    for j in 0..n {
        red.reduce_qudit(j)?;
    }
    let cur = &red.cur;
    let m = 2 * n;
    let sym_identity = (0..m).all(|r| (0..m).all(|c| cur.entry(r, c) == u32::from(r == c)));
    if !sym_identity {
        return Err(Error::SynthesisFailure(format!("symplectic reduction did not terminate\n{t}")));
    }
    // Pauli X^a Z^b: X_i -> w^(b_i) X_i, Z_i -> w^(-a_i) Z_i
    let modulus = phase_modulus(d);
    let step = modulus / d;
    if cur.phases().iter().any(|r| r % step != 0) {
        return Err(Error::SynthesisFailure(format!("residual phases {:?} are not a Pauli\n{t}", cur.phases())));
    }
    let b: Vec<u32> = (0..n).map(|i| cur.phases()[i] / step).collect();
    let a: Vec<u32> = (0..n).map(|i| (d - cur.phases()[n + i] / step) % d).collect();
    let pauli = PauliOperator::new(d, a, b, 0)?.to_dense();

    let mut acc = pauli.into_matrix();
    for op in red.ops.iter().rev() {
        let g = match *op {
            Op::Local(site, Local::F) => embed_single(&gens.f_dense, d, n, site)?,
            Op::Local(site, Local::P) => embed_single(&gens.p_dense, d, n, site)?,
            Op::Cz(a, b, c) => cz_gate(d, n, a, b, c)?,
        };
        acc = g.matrix().adjoint() * acc;
    }
    let u = DenseUnitary::from_matrix_unchecked(canonical_phase(&acc));
    for k in 0..m {
        let g = PauliOperator::generator(d, n, k)?.to_dense();
        let lhs = u.conjugate(g.matrix());
        let rhs = t.image(k).to_dense();
        if max_abs_diff(&lhs, rhs.matrix()) > MEMBERSHIP_TOL {
            return Err(Error::SynthesisFailure(format!("dense conjugation check failed on generator {k}\n{t}")));
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::random_clifford;
    use crate::qudit_algebra::{phase_insensitive_distance, CMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn local_table_sizes() {
        for d in [2u32, 3, 5, 7] {
            let g = Generators::get(d).unwrap();
            assert_eq!(g.local_words.len() as u32, d * (d * d - 1));
        }
    }

    #[test]
    fn identity_synthesizes_to_identity() {
        for (d, n) in [(2, 1), (3, 2), (5, 1)] {
            let u = CliffordTableau::identity(d, n).unwrap().to_dense().unwrap();
            assert!(max_abs_diff(u.matrix(), &CMatrix::identity(u.dim(), u.dim())) < 1e-12);
        }
    }

    #[test]
    fn fourier_round_trip() {
        for d in [2u32, 3, 5, 7] {
            let f = gate(GateKind::F, d).unwrap();
            let t = CliffordTableau::from_dense(&f, d, 1).unwrap();
            let u = t.to_dense().unwrap();
            assert!(phase_insensitive_distance(u.matrix(), f.matrix()) < 1e-10, "d={d}");
        }
    }

    #[test]
    fn random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (d, n) in [(2u32, 1usize), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2), (2, 3)] {
            for _ in 0..20 {
                let t = random_clifford(d, n, &mut rng).unwrap();
                let u = t.to_dense().unwrap();
                let back = CliffordTableau::from_dense(&u, d, n).unwrap();
                assert_eq!(back, t);
            }
        }
    }
}
