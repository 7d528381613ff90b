use proptest::prelude::*;
use qudit_rb::clifford::{cached_group, random_clifford, CliffordTableau};
use qudit_rb::qudit_algebra::{
    max_abs_diff, pauli_group, pauli_membership, phase_insensitive_distance, PauliOperator,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHAPES: [(u32, usize); 5] = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)];

fn pauli_strategy() -> impl Strategy<Value = PauliOperator> {
    (0..SHAPES.len(), any::<u64>()).prop_map(|(s, seed)| {
        let (d, n) = SHAPES[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_pauli(d, n, &mut rng)
    })
}

fn random_pauli(d: u32, n: usize, rng: &mut ChaCha8Rng) -> PauliOperator {
    let x = (0..n).map(|_| rng.random_range(0..d)).collect();
    let z = (0..n).map(|_| rng.random_range(0..d)).collect();
    let modulus = if d % 2 == 0 { 2 * d } else { d };
    PauliOperator::new(d, x, z, rng.random_range(0..modulus)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_product_matches_dense_product(p in pauli_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_pauli(p.d(), p.num_qudits(), &mut rng);
        let pq = p.mul(&q).unwrap();
        let dense = p.to_dense().matrix() * q.to_dense().matrix();
        prop_assert!(max_abs_diff(pq.to_dense().matrix(), &dense) < 1e-12);
    }

    #[test]
    fn commutation_phase_is_symplectic_form(p in pauli_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_pauli(p.d(), p.num_qudits(), &mut rng);
        let d = p.d();
        let w = num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
        let k = p.symplectic_product(&q);
        let lhs = q.to_dense().matrix() * p.to_dense().matrix();
        let rhs = p.to_dense().matrix() * q.to_dense().matrix() * w.powu(k);
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn pauli_power_d_is_identity(p in pauli_strategy()) {
        let pd = p.pow(p.d());
        prop_assert!(pd.is_identity_up_to_phase());
        let dense = p.to_dense().pow(p.d());
        prop_assert!(max_abs_diff(dense.matrix(), pd.to_dense().matrix()) < 1e-12);
        if p.d() % 2 == 1 {
            prop_assert_eq!(pd.phase(), 0);
        }
    }

    #[test]
    fn tableau_double_inverse_is_exact(s in 0..SHAPES.len(), seed in any::<u64>()) {
        let (d, n) = SHAPES[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_clifford(d, n, &mut rng).unwrap();
        prop_assert_eq!(t.invert().invert(), t.clone());
        prop_assert!(t.compose(&t.invert()).unwrap().is_identity());
        prop_assert!(t.invert().compose(&t).unwrap().is_identity());
    }

    #[test]
    fn composition_is_associative(s in 0..SHAPES.len(), seed in any::<u64>()) {
        let (d, n) = SHAPES[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [0; 3].map(|_| random_clifford(d, n, &mut rng).unwrap());
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn conjugation_matches_dense(s in 0..SHAPES.len(), seed in any::<u64>()) {
        let (d, n) = SHAPES[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_clifford(d, n, &mut rng).unwrap();
        let p = random_pauli(d, n, &mut rng);
        let u = t.to_dense().unwrap();
        let dense = u.conjugate(p.to_dense().matrix());
        let image = t.conjugate_pauli(&p).unwrap();
        // tableau phases are exact, so the comparison is not up to phase
        prop_assert!(max_abs_diff(&dense, image.to_dense().matrix()) < 1e-9);
    }

    #[test]
    fn composition_matches_dense_product(s in 0..SHAPES.len(), seed in any::<u64>()) {
        let (d, n) = SHAPES[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_clifford(d, n, &mut rng).unwrap();
        let b = random_clifford(d, n, &mut rng).unwrap();
        let ab = a.compose(&b).unwrap().to_dense().unwrap();
        let dense = b.to_dense().unwrap().matrix() * a.to_dense().unwrap().matrix();
        prop_assert!(phase_insensitive_distance(ab.matrix(), &dense) < 1e-9);
    }

    #[test]
    fn dense_round_trip(s in 0..SHAPES.len(), seed in any::<u64>()) {
        let (d, n) = SHAPES[s];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_clifford(d, n, &mut rng).unwrap();
        let back = CliffordTableau::from_dense(&t.to_dense().unwrap(), d, n).unwrap();
        prop_assert_eq!(back, t);
    }
}

#[test]
fn group_products_match_dense_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (d, n) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
        let g = cached_group(d, n).unwrap();
        let dense = g.dense_elements().unwrap();
        for _ in 0..1000 {
            let i = rng.random_range(0..g.len());
            let j = rng.random_range(0..g.len());
            let k = g.mul(i, j);
            let prod = dense[j].matrix() * dense[i].matrix();
            assert!(phase_insensitive_distance(dense[k].matrix(), &prod) < 1e-9, "d={d} n={n}");
            assert_eq!(g.inv(g.inv(i)), i);
        }
    }
}

#[test]
fn qutrit_group_normalizes_paulis() {
    let g = cached_group(3, 1).unwrap();
    let paulis: Vec<_> = pauli_group(3, 1).unwrap().into_iter().skip(1).collect();
    for u in g.dense_elements().unwrap() {
        for p in &paulis {
            let c = u.conjugate(p.to_dense().matrix());
            assert!(pauli_membership(&c, 3, 1).unwrap().is_some());
        }
    }
}

#[test]
fn qutrit_group_mixes_paulis_evenly() {
    let g = cached_group(3, 1).unwrap();
    let x = PauliOperator::x_on(3, 1, 0).unwrap();
    let mut counts = std::collections::HashMap::new();
    for t in g.elements() {
        let img = t.conjugate_pauli(&x).unwrap();
        *counts.entry((img.x_exponents().to_vec(), img.z_exponents().to_vec())).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 8);
    assert!(counts.values().all(|&c| c == 27));
}
