use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::channels::{KrausChannel, Superoperator};
use crate::clifford::CliffordTableau;
use crate::qudit_algebra::{CMatrix, DenseUnitary, DensityMatrix, StateVector};
use crate::{Error, Result};

/// Preparation and measurement errors, each modeled as a channel: the prepared state
/// is `prep(|psi><psi|)` and the measured effect is `meas^dag(|psi><psi|)`.
#[derive(Clone, Debug, Default)]
pub struct Spam {
    pub prep: Option<KrausChannel>,
    pub meas: Option<KrausChannel>,
}

impl Spam {
    pub fn none() -> Self {
        Spam::default()
    }

    pub fn prepared_state(&self, psi: &StateVector) -> Result<DensityMatrix> {
        match &self.prep {
            Some(ch) => ch.apply(&psi.density()),
            None => Ok(psi.density()),
        }
    }

    pub fn effect(&self, psi: &StateVector) -> Result<CMatrix> {
        match &self.meas {
            Some(ch) => ch.adjoint_apply(&psi.projector()),
            None => Ok(psi.projector()),
        }
    }
}

fn check_dims(dim: usize, noise: usize, rho: &CMatrix, effect: &CMatrix) -> Result<()> {
    for found in [noise, rho.nrows(), effect.nrows()] {
        if found != dim {
            return Err(Error::DimensionMismatch { expected: dim.to_string(), found: found.to_string() });
        }
    }
    Ok(())
}

/// `U rho U^dag` followed by the noise map, for each gate in order.
pub(crate) fn propagate<'a>(
    gates: impl IntoIterator<Item = &'a CMatrix>,
    noise: &Superoperator,
    rho: &CMatrix,
) -> CMatrix {
    let d = rho.nrows();
    let mut state = rho.clone();
    for u in gates {
        let conj = u * &state * u.adjoint();
        let v = noise.matrix() * CMatrix::from_column_slice(d * d, 1, conj.as_slice());
        state = CMatrix::from_column_slice(d, d, v.as_slice());
    }
    state
}

pub(crate) fn overlap(effect: &CMatrix, rho: &CMatrix) -> f64 {
    // tr(E rho) without forming the product
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..rho.nrows() {
        for k in 0..rho.nrows() {
            acc += effect[(i, k)] * rho[(k, i)];
        }
    }
    acc.re
}

/// `tr[E (Lambda o C_j) o ... o (Lambda o C_1)(rho)]` by exact density-matrix propagation.
pub fn exact_sequence_fidelity(
    seq: &[CliffordTableau],
    noise: &KrausChannel,
    rho: &DensityMatrix,
    effect: &CMatrix,
) -> Result<f64> {
    let dense = seq.iter().map(CliffordTableau::to_dense).collect::<Result<Vec<_>>>()?;
    exact_sequence_fidelity_dense(&dense, &noise.superoperator(), rho, effect)
}

pub fn exact_sequence_fidelity_dense(
    seq: &[DenseUnitary],
    noise: &Superoperator,
    rho: &DensityMatrix,
    effect: &CMatrix,
) -> Result<f64> {
    let dim = rho.dim();
    check_dims(dim, noise.dim(), rho.matrix(), effect)?;
    if let Some(u) = seq.iter().find(|u| u.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim.to_string(), found: u.dim().to_string() });
    }
    let out = propagate(seq.iter().map(DenseUnitary::matrix), noise, rho.matrix());
    Ok(overlap(effect, &out))
}

/// `Binomial(shots, q) / shots`. Values of `q` below `-1e-9` indicate a broken channel
/// and are rejected; smaller excursions outside `[0, 1]` are clamped.
pub fn binomial_survival<R: Rng + ?Sized>(q: f64, shots: u64, rng: &mut R) -> Result<f64> {
    if shots == 0 {
        return Err(Error::OutOfRange("at least one shot is required".into()));
    }
    if !(q >= -1e-9) || q > 1.0 + 1e-9 {
        return Err(Error::NegativeProbability(q));
    }
    let q = q.clamp(0.0, 1.0);
    let hits = Binomial::new(shots, q).map_err(|e| Error::OutOfRange(e.to_string()))?.sample(rng);
    Ok(hits as f64 / shots as f64)
}

/// Propagates the SPAM-perturbed state once and draws `shots` projective outcomes.
pub fn sample_survival<R: Rng + ?Sized>(
    seq: &[CliffordTableau],
    noise: &KrausChannel,
    spam: &Spam,
    psi: &StateVector,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    let rho = spam.prepared_state(psi)?;
    let effect = spam.effect(psi)?;
    let q = exact_sequence_fidelity(seq, noise, &rho, &effect)?;
    binomial_survival(q, shots, rng)
}

/// Coefficients of `A0 p^(j-1) + B0` for given noise, state and effect.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayPrediction {
    pub a0: f64,
    pub b0: f64,
    pub p: f64,
    /// `(j, A0 p^(j-1) + B0)` for `j` in `2..=max_len`.
    pub curve: Vec<(usize, f64)>,
}

/// `A0 = tr[E Lambda(rho - 1/D)]`, `B0 = tr[E Lambda(1)] / D`.
pub fn predicted_decay(
    p: f64,
    noise: &KrausChannel,
    rho: &DensityMatrix,
    effect: &CMatrix,
    max_len: usize,
) -> Result<DecayPrediction> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("decay base {p} outside [0, 1]")));
    }
    let dim = rho.dim();
    check_dims(dim, noise.dim(), rho.matrix(), effect)?;
    let id = CMatrix::identity(dim, dim);
    let inv_d = Complex64::new(1.0 / dim as f64, 0.0);
    let traceless = rho.matrix() - &id * inv_d;
    let a0 = overlap(effect, &noise.apply_matrix(&traceless)?);
    let b0 = overlap(effect, &noise.apply_matrix(&id)?) / dim as f64;
    let curve = (2..=max_len).map(|j| (j, a0 * p.powi(j as i32 - 1) + b0)).collect();
    Ok(DecayPrediction { a0, b0, p, curve })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing;
    use crate::rb::generate_sequence;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_sequences_survive() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let psi = StateVector::basis(3, 0).unwrap();
        for j in [2, 7, 15] {
            let s = generate_sequence(j, 3, 1, &mut rng).unwrap();
            let f = exact_sequence_fidelity(&s, &KrausChannel::identity(3), &psi.density(), &psi.projector()).unwrap();
            assert!((f - 1.0).abs() < 1e-10);
            assert_eq!(sample_survival(&s, &KrausChannel::identity(3), &Spam::none(), &psi, 100, &mut rng).unwrap(), 1.0);
        }
    }

    #[test]
    fn depolarizing_single_sequence_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = StateVector::basis(3, 0).unwrap();
        let p: f64 = 0.9;
        let noise = depolarizing(p, 3).unwrap();
        for m in [2, 5, 12] {
            let s = generate_sequence(m, 3, 1, &mut rng).unwrap();
            let f = exact_sequence_fidelity(&s, &noise, &psi.density(), &psi.projector()).unwrap();
            let expect = p.powi(m as i32) * (2.0 / 3.0) + 1.0 / 3.0;
            assert!((f - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(binomial_survival(1.0, 50, &mut rng).unwrap(), 1.0);
        assert_eq!(binomial_survival(0.0, 50, &mut rng).unwrap(), 0.0);
        assert_eq!(binomial_survival(-1e-12, 50, &mut rng).unwrap(), 0.0);
        assert!(matches!(binomial_survival(-1e-3, 50, &mut rng), Err(Error::NegativeProbability(_))));
        assert!(binomial_survival(0.5, 0, &mut rng).is_err());
    }

    #[test]
    fn prediction_examples() {
        let psi = StateVector::basis(3, 0).unwrap();
        let id = predicted_decay(1.0, &KrausChannel::identity(3), &psi.density(), &psi.projector(), 5).unwrap();
        assert!((id.a0 - 2.0 / 3.0).abs() < 1e-14 && (id.b0 - 1.0 / 3.0).abs() < 1e-14);
        let dep = predicted_decay(0.8, &depolarizing(0.8, 3).unwrap(), &psi.density(), &psi.projector(), 5).unwrap();
        assert!((dep.a0 - 0.8 * 2.0 / 3.0).abs() < 1e-14 && (dep.b0 - 1.0 / 3.0).abs() < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(3);
        let flat = predicted_decay(0.8, &depolarizing(0.8, 3).unwrap(), &mixed, &psi.projector(), 5).unwrap();
        assert!(flat.a0.abs() < 1e-15);
        assert!(predicted_decay(1.2, &KrausChannel::identity(3), &psi.density(), &psi.projector(), 5).is_err());
    }
}
