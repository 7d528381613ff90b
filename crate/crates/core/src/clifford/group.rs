use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::sample::clifford_group_order;
use super::tableau::CliffordTableau;
use crate::qudit_algebra::{check_prime, cz_gate, embed_single, gate, DenseUnitary, GateKind};
use crate::{Error, Result};

/// Largest group enumerated unless the caller raises the cap.
pub const DEFAULT_GROUP_CAP: u128 = 1_000_000;

/// Groups at most this large get their Cayley table filled eagerly.
const EAGER_PROD_LIMIT: usize = 1024;

/// The full Clifford group (modulo global phase) for `n` qudits of dimension `d`,
/// with multiplication and inverse tables over element indices. Element 0 is the
/// identity.
pub struct CliffordGroupTable {
    d: u32,
    n: usize,
    elements: Vec<CliffordTableau>,
    index: HashMap<CliffordTableau, u32>,
    inv: Vec<u32>,
    prod: Vec<OnceLock<Box<[u32]>>>,
    dense: OnceLock<Vec<DenseUnitary>>,
}

impl std::fmt::Debug for CliffordGroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CliffordGroupTable")
            .field("d", &self.d)
            .field("n", &self.n)
            .field("len", &self.elements.len())
            .finish()
    }
}

/// Generators `F_k`, `P_k`, `Z_k` on each qudit and `CZ` on each pair.
pub fn group_generators(d: u32, n: usize) -> Result<Vec<CliffordTableau>> {
    check_prime(d)?;
    let mut out = Vec::new();
    for kind in [GateKind::F, GateKind::P, GateKind::Z] {
        let g = gate(kind, d)?;
        for site in 0..n {
            out.push(CliffordTableau::from_dense(&embed_single(&g, d, n, site)?, d, n)?);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            out.push(CliffordTableau::from_dense(&cz_gate(d, n, a, b, 1)?, d, n)?);
        }
    }
    Ok(out)
}

/// Breadth-first closure of `generators` under composition, identity first.
pub fn closure(generators: &[CliffordTableau], cap: usize) -> Result<Vec<CliffordTableau>> {
    let first = generators
        .first()
        .ok_or_else(|| Error::OutOfRange("closure needs at least one generator".into()))?;
    let (d, n) = (first.d(), first.num_qudits());
    let id = CliffordTableau::identity(d, n)?;
    let mut seen: HashMap<CliffordTableau, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let next = elements[i].compose(g)?;
            if !seen.contains_key(&next) {
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge {
                        d,
                        n,
                        cardinality: clifford_group_order(d, n),
                        cap: cap as u128,
                    });
                }
                seen.insert(next.clone(), ());
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// Single-qutrit Clifford group as the product set `L M N`: `L` is generated by `P`
/// and `X` (27 elements), `M = {1, F^2}` and `N = {1, F, P F, P^2 F}` (operator
/// products). Element `(l, m, n)` is the unitary `U_n U_m U_l`: `l` acts first.
pub fn qutrit_lmn_elements() -> Result<Vec<CliffordTableau>> {
    let d = 3;
    let t = |k: GateKind| CliffordTableau::from_dense(&gate(k, d)?, d, 1);
    let (f, p, x) = (t(GateKind::F)?, t(GateKind::P)?, t(GateKind::X)?);
    let id = CliffordTableau::identity(d, 1)?;
    let l = closure(&[p.clone(), x], 1000)?;
    let f2 = f.compose(&f)?;
    let m = [id.clone(), f2];
    // U_P U_F applies F first
    let pf = f.compose(&p)?;
    let p2f = pf.compose(&p)?;
    let nset = [id, f, pf, p2f];
    let mut out = Vec::with_capacity(l.len() * m.len() * nset.len());
    for a in &l {
        for b in &m {
            for c in &nset {
                out.push(a.compose(b)?.compose(c)?);
            }
        }
    }
    Ok(out)
}

pub fn enumerate_group(d: u32, n: usize) -> Result<CliffordGroupTable> {
    enumerate_group_with_cap(d, n, DEFAULT_GROUP_CAP)
}

pub fn enumerate_group_with_cap(d: u32, n: usize, cap: u128) -> Result<CliffordGroupTable> {
    check_prime(d)?;
    if n == 0 {
        return Err(Error::OutOfRange("at least one qudit is required".into()));
    }
    let cardinality = clifford_group_order(d, n);
    if cardinality > cap {
        return Err(Error::GroupTooLarge { d, n, cardinality, cap });
    }
    let elements = if (d, n) == (3, 1) {
        qutrit_lmn_elements()?
    } else {
        closure(&group_generators(d, n)?, cap as usize)?
    };
    CliffordGroupTable::from_elements(d, n, elements)
}

/// Process-wide enumerated groups, built on first request.
pub fn cached_group(d: u32, n: usize) -> Result<Arc<CliffordGroupTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<CliffordGroupTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().expect("poisoned").get(&(d, n)) {
        return Ok(g.clone());
    }
    let built = Arc::new(enumerate_group(d, n)?);
    Ok(cache.lock().expect("poisoned").entry((d, n)).or_insert(built).clone())
}

impl CliffordGroupTable {
    /// Wraps a complete list of group elements with identity first. Fails if the list
    /// has duplicates, the wrong size, or is not closed under inversion.
    pub fn from_elements(d: u32, n: usize, elements: Vec<CliffordTableau>) -> Result<Self> {
        let expected = clifford_group_order(d, n);
        if elements.len() as u128 != expected {
            return Err(Error::InvalidTableau(format!(
                "group for d={d}, n={n} has {} elements, expected {expected}",
                elements.len()
            )));
        }
        if !elements[0].is_identity() {
            return Err(Error::InvalidTableau("element 0 must be the identity".into()));
        }
        if let Some(bad) = elements.iter().find(|e| e.d() != d || e.num_qudits() != n) {
            return Err(Error::DimensionMismatch {
                expected: format!("d={d}, n={n}"),
                found: format!("d={}, n={}", bad.d(), bad.num_qudits()),
            });
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i as u32).is_some() {
                return Err(Error::InvalidTableau(format!("duplicate element at index {i}")));
            }
        }
        let inv = elements
            .par_iter()
            .map(|e| {
                index
                    .get(&e.invert())
                    .copied()
                    .ok_or_else(|| Error::InvalidTableau("element set not closed under inversion".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        let len = elements.len();
        let table = CliffordGroupTable {
            d,
            n,
            elements,
            index,
            inv,
            prod: (0..len).map(|_| OnceLock::new()).collect(),
            dense: OnceLock::new(),
        };
        if len <= EAGER_PROD_LIMIT {
            (0..len).into_par_iter().try_for_each(|i| table.row(i).map(|_| ()))?;
        }
        Ok(table)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CliffordTableau] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &CliffordTableau {
        &self.elements[i]
    }

    pub fn index_of(&self, t: &CliffordTableau) -> Option<usize> {
        self.index.get(t).map(|&i| i as usize)
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    fn row(&self, i: usize) -> Result<&[u32]> {
        if let Some(r) = self.prod[i].get() {
            return Ok(r);
        }
        let a = &self.elements[i];
        let row = self
            .elements
            .iter()
            .map(|b| {
                let c = a.compose(b)?;
                self.index
                    .get(&c)
                    .copied()
                    .ok_or_else(|| Error::InvalidTableau("element set not closed under composition".into()))
            })
            .collect::<Result<Box<[u32]>>>()?;
        Ok(self.prod[i].get_or_init(|| row))
    }

    /// Index of the element that applies `i` first and then `j`.
    pub fn prod(&self, i: usize, j: usize) -> usize {
        self.row(i).expect("group table is closed")[j] as usize
    }

    /// Same as [`prod`](Self::prod), but composes the tableaux directly when the
    /// row has not been tabulated yet instead of filling it.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match self.prod[i].get() {
            Some(row) => row[j] as usize,
            None => {
                let c = self.elements[i].compose(&self.elements[j]).expect("same shape");
                self.index_of(&c).expect("group table is closed")
            }
        }
    }

    /// Dense unitaries of all elements, synthesized on first use.
    pub fn dense_elements(&self) -> Result<&[DenseUnitary]> {
        if let Some(v) = self.dense.get() {
            return Ok(v);
        }
        let v = self.elements.par_iter().map(|t| t.to_dense()).collect::<Result<Vec<_>>>()?;
        Ok(self.dense.get_or_init(|| v))
    }
}
