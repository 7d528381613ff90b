//! Haar-random unitaries, states and channels, plus Monte Carlo integrators used as
//! independent oracles for the closed forms elsewhere in the crate.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::kraus::KrausChannel;
use super::superop::Superoperator;
use crate::qudit_algebra::{CMatrix, DenseUnitary, StateVector};

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// QR of a Ginibre matrix with the diagonal phases of `R` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseUnitary {
    let qr = ginibre(dim, dim, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    DenseUnitary::from_matrix_unchecked(q)
}

pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let v = ginibre(dim, 1, rng);
    let norm = v.norm();
    let amps = nalgebra::DVector::from_iterator(dim, v.iter().map(|z| z / norm));
    StateVector::new(amps).expect("normalized")
}

/// Channel from a Haar-random Stinespring isometry with environment dimension `env`.
pub fn random_channel<R: Rng + ?Sized>(dim: usize, env: usize, rng: &mut R) -> KrausChannel {
    let u = haar_unitary(dim * env, rng);
    let kraus = (0..env)
        .map(|e| u.matrix().view((e * dim, 0), (dim, dim)).into_owned())
        .collect();
    KrausChannel::from_kraus_unchecked(dim, kraus)
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

/// Monte Carlo average of `<psi| Lambda(|psi><psi|) |psi>` over Haar states.
pub fn mc_average_fidelity<R: Rng + ?Sized>(ch: &KrausChannel, samples: usize, rng: &mut R) -> Estimate {
    let mut sum = 0.0;
    let mut sq = 0.0;
    for _ in 0..samples {
        let psi = haar_state(ch.dim(), rng);
        let out = ch.apply_matrix(&psi.projector()).expect("matching dimension");
        let a = psi.amplitudes();
        let f = (a.adjoint() * out * a)[(0, 0)].re;
        sum += f;
        sq += f * f;
    }
    mean_and_se(sum, sq, samples)
}

fn mean_and_se(sum: f64, sq: f64, n: usize) -> Estimate {
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    Estimate { mean, std_err: (var / nf).sqrt() }
}

/// Elementwise Monte Carlo estimate of the Haar twirl superoperator.
#[derive(Clone, Debug)]
pub struct HaarTwirlEstimate {
    pub mean: Superoperator,
    pub se_re: DMatrix<f64>,
    pub se_im: DMatrix<f64>,
}

pub fn mc_haar_twirl<R: Rng + ?Sized>(ch: &KrausChannel, samples: usize, rng: &mut R) -> HaarTwirlEstimate {
    let d = ch.dim();
    let dd = d * d;
    let s = ch.superoperator();
    let mut sum = CMatrix::zeros(dd, dd);
    let mut sq_re = DMatrix::<f64>::zeros(dd, dd);
    let mut sq_im = DMatrix::<f64>::zeros(dd, dd);
    for _ in 0..samples {
        let u = haar_unitary(d, rng);
        let m = u.matrix();
        let sc = m.conjugate().kronecker(m);
        let term = sc.adjoint() * s.matrix() * sc;
        for (k, z) in term.iter().enumerate() {
            sq_re[k] += z.re * z.re;
            sq_im[k] += z.im * z.im;
        }
        sum += term;
    }
    let mut se_re = DMatrix::<f64>::zeros(dd, dd);
    let mut se_im = DMatrix::<f64>::zeros(dd, dd);
    for k in 0..dd * dd {
        se_re[k] = mean_and_se(sum[k].re, sq_re[k], samples).std_err;
        se_im[k] = mean_and_se(sum[k].im, sq_im[k], samples).std_err;
    }
    let mean = Superoperator::new(d, sum / Complex64::new(samples as f64, 0.0)).expect("square");
    HaarTwirlEstimate { mean, se_re, se_im }
}
