use proptest::prelude::*;
use qudit_rb::channels::haar::{haar_state, mc_haar_twirl, random_channel};
use qudit_rb::channels::{depolarizing, is_depolarizing, twirl, KrausChannel, Superoperator};
use qudit_rb::clifford::cached_group;
use qudit_rb::qudit_algebra::max_abs_diff;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twirl_is_idempotent(seed in any::<u64>()) {
        let g = cached_group(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(3, 3, &mut rng);
        let once = twirl(&ch, &g).unwrap();
        let twice = twirl(&once.to_kraus().unwrap(), &g).unwrap();
        prop_assert!(once.distance(&twice) < 1e-10);
    }

    #[test]
    fn twirl_preserves_average_fidelity(seed in any::<u64>()) {
        let g = cached_group(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(3, 2, &mut rng);
        let t = twirl(&ch, &g).unwrap().to_kraus().unwrap();
        prop_assert!((t.average_fidelity() - ch.average_fidelity()).abs() < 1e-10);
    }

    #[test]
    fn depolarizing_powers(p in 0.0f64..1.0, m in 1u32..=50) {
        let s = Superoperator::depolarizing(p, 3);
        let target = depolarizing(p.powi(m as i32), 3).unwrap().superoperator();
        prop_assert!(s.pow(m).distance(&target) < 1e-9);
    }

    #[test]
    fn kraus_and_superoperator_agree_on_states(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(dim, dim, &mut rng);
        let s = ch.superoperator();
        for _ in 0..20 {
            let rho = haar_state(dim, &mut rng).density();
            let a = ch.apply(&rho).unwrap();
            let b = s.apply(&rho).unwrap();
            prop_assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-9);
        }
    }

    #[test]
    fn twirled_random_channels_are_depolarizing(seed in any::<u64>()) {
        let g = cached_group(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(2, 2, &mut rng);
        let p = is_depolarizing(&twirl(&ch, &g).unwrap(), 1e-10);
        prop_assert!(p.is_some());
        prop_assert!((p.unwrap() - (2.0 * ch.average_fidelity() - 1.0)).abs() < 1e-10);
    }
}

#[test]
fn twirl_is_deterministic_across_thread_counts() {
    let g = cached_group(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ch = random_channel(4, 2, &mut rng);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| twirl(&ch, &g).unwrap())
    };
    let a = run(1);
    for threads in [3, 8] {
        assert_eq!(run(threads).matrix(), a.matrix());
    }
}

/// Clifford twirl against a Monte Carlo Haar twirl. Each superoperator entry is a
/// separate 3-sigma comparison, so a few excursions among the 1620 checks are
/// expected; the test bounds the excursion rate and the worst z-score instead.
#[test]
fn clifford_twirl_matches_haar_twirl() {
    let g = cached_group(3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut checks, mut outside, mut worst) = (0usize, 0usize, 0.0f64);
    for _ in 0..10 {
        let ch = random_channel(3, 3, &mut rng);
        let exact = twirl(&ch, &g).unwrap();
        let est = mc_haar_twirl(&ch, 100_000, &mut rng);
        for k in 0..81 {
            let diff = est.mean.matrix()[k] - exact.matrix()[k];
            for (delta, se) in [(diff.re, est.se_re[k]), (diff.im, est.se_im[k])] {
                checks += 1;
                if delta.abs() > 3.0 * se + 1e-12 {
                    outside += 1;
                }
                // entries fixed for every unitary have se ~ 1e-17 and rounding-level deltas
                worst = worst.max(delta.abs() / (se + 1e-12));
            }
        }
    }
    eprintln!("haar twirl: {outside} of {checks} entries beyond 3 sigma, worst z {worst:.2}");
    assert!((outside as f64) <= 0.01 * checks as f64, "{outside} of {checks} beyond 3 sigma");
    assert!(worst < 5.0, "worst z-score {worst}");
}

#[test]
fn identity_channel_is_fixed_by_every_twirl() {
    for (d, n) in [(2, 1), (3, 1), (2, 2)] {
        let g = cached_group(d, n).unwrap();
        let dim = (d as usize).pow(n as u32);
        let t = twirl(&KrausChannel::identity(dim), &g).unwrap();
        assert!(t.distance(&Superoperator::identity(dim)) < 1e-12);
    }
}
