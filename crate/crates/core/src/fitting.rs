//! Least-squares fit of `F(j) = A0 p^(j-1) + B0` and the conversions between the
//! decay base `p`, the average error rate and the average fidelity.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const MAX_ITERATIONS: usize = 500;
const STEP_TOL: f64 = 1e-12;
const GRAD_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub a0: f64,
    pub p: f64,
    pub b0: f64,
    pub residual_rms: f64,
    /// Covariance of `(A0, p, B0)`, scaled by the weighted residual variance.
    pub covariance: [[f64; 3]; 3],
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

impl DecayFit {
    pub fn model(&self, j: usize) -> f64 {
        model(&Vector3::new(self.a0, self.p, self.b0), (j as f64) - 1.0)
    }

    pub fn std_errors(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.covariance[i][i].max(0.0).sqrt())
    }
}

#[derive(Clone, Debug, Default)]
pub struct FitOptions {
    /// Per-point weights `w_j`; unweighted when absent.
    pub weights: Option<Vec<f64>>,
    /// Typical standard error of one mean, used only for flat-curve detection. Derived
    /// from the weights when absent.
    pub standard_error: Option<f64>,
}

fn model(theta: &Vector3<f64>, x: f64) -> f64 {
    theta[0] * theta[1].powf(x) + theta[2]
}

fn jacobian_row(theta: &Vector3<f64>, x: f64) -> Vector3<f64> {
    let dp = if x == 0.0 { 0.0 } else { theta[0] * x * theta[1].powf(x - 1.0) };
    Vector3::new(theta[1].powf(x), dp, 1.0)
}

struct Problem<'a> {
    xs: Vec<f64>,
    ys: &'a [f64],
    ws: Vec<f64>,
}

impl Problem<'_> {
    fn cost(&self, theta: &Vector3<f64>) -> f64 {
        self.xs
            .iter()
            .zip(self.ys)
            .zip(&self.ws)
            .map(|((&x, &y), &w)| w * (y - model(theta, x)).powi(2))
            .sum()
    }

    /// `(J^T W J, J^T W r)`.
    fn normal(&self, theta: &Vector3<f64>) -> (Matrix3<f64>, Vector3<f64>) {
        let mut h = Matrix3::zeros();
        let mut g = Vector3::zeros();
        for ((&x, &y), &w) in self.xs.iter().zip(self.ys).zip(&self.ws) {
            let row = jacobian_row(theta, x);
            h += row * row.transpose() * w;
            g += row * (w * (y - model(theta, x)));
        }
        (h, g)
    }

    /// Best `(A, B)` for a fixed `p` by weighted linear least squares.
    fn linear_given_p(&self, p: f64) -> Option<(Vector3<f64>, f64)> {
        let (mut s00, mut s01, mut s11, mut t0, mut t1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for ((&x, &y), &w) in self.xs.iter().zip(self.ys).zip(&self.ws) {
            let u = p.powf(x);
            s00 += w * u * u;
            s01 += w * u;
            s11 += w;
            t0 += w * u * y;
            t1 += w * y;
        }
        let det = s00 * s11 - s01 * s01;
        if det.abs() < 1e-300 {
            return None;
        }
        let a = (t0 * s11 - s01 * t1) / det;
        let b = (s00 * t1 - s01 * t0) / det;
        let theta = Vector3::new(a, p, b);
        Some((theta, self.cost(&theta)))
    }

    /// Undamped Gauss-Newton steps accepted while the gradient norm shrinks. Near the
    /// minimum the cost is flat to rounding, but the gradient is still resolved.
    fn polish(&self, mut theta: Vector3<f64>) -> Vector3<f64> {
        let (mut h, mut g) = self.normal(&theta);
        for _ in 0..20 {
            let Some(delta) = h.lu().solve(&g) else { break };
            let mut trial = theta + delta;
            trial[1] = trial[1].clamp(0.0, 1.0);
            let (h2, g2) = self.normal(&trial);
            if !(g2.norm() < g.norm()) {
                break;
            }
            theta = trial;
            h = h2;
            g = g2;
        }
        theta
    }

    fn lm(&self, start: Vector3<f64>) -> (Vector3<f64>, usize, bool, f64) {
        let mut theta = start;
        theta[1] = theta[1].clamp(0.0, 1.0);
        let mut cost = self.cost(&theta);
        let mut lambda = 1e-3;
        for it in 1..=MAX_ITERATIONS {
            let (h, g) = self.normal(&theta);
            let gnorm = g.norm();
            if gnorm < GRAD_TOL {
                return (theta, it, true, gnorm);
            }
            loop {
                let mut damped = h;
                for i in 0..3 {
                    damped[(i, i)] += lambda * h[(i, i)].max(1e-30);
                }
                let Some(delta) = damped.lu().solve(&g) else {
                    lambda *= 10.0;
                    if lambda > 1e30 {
                        return (theta, it, false, gnorm);
                    }
                    continue;
                };
                let mut trial = theta + delta;
                trial[1] = trial[1].clamp(0.0, 1.0);
                let step = (trial - theta).norm();
                if step <= STEP_TOL * (theta.norm() + STEP_TOL) {
                    return (theta, it, true, gnorm);
                }
                let trial_cost = self.cost(&trial);
                if trial_cost < cost {
                    theta = trial;
                    cost = trial_cost;
                    lambda = (lambda / 10.0).max(1e-12);
                    break;
                }
                lambda *= 10.0;
                if lambda > 1e30 {
                    return (theta, it, true, gnorm);
                }
            }
        }
        let gnorm = self.normal(&theta).1.norm();
        (theta, MAX_ITERATIONS, false, gnorm)
    }
}

/// Starting point: `B0` from the tail mean, `p` from the log-slope of the first half
/// after subtracting it, `A0` from the first point.
fn heuristic_start(xs: &[f64], ys: &[f64]) -> Vector3<f64> {
    let n = ys.len();
    let tail = (n / 5).max(2).min(n);
    let b = ys[n - tail..].iter().sum::<f64>() / tail as f64;
    let half = (n / 2).max(2);
    let sign = (ys[0] - b).signum();
    let pts: Vec<(f64, f64)> = xs[..half]
        .iter()
        .zip(&ys[..half])
        .filter(|(_, &y)| (y - b) * sign > 0.0)
        .map(|(&x, &y)| (x, ((y - b) * sign).ln()))
        .collect();
    let mut p = 0.9;
    if pts.len() >= 2 {
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx > 0.0 {
            p = (sxy / sxx).exp().clamp(1e-3, 1.0 - 1e-9);
        }
    }
    let a = (ys[0] - b) / p.powf(xs[0]);
    Vector3::new(a, p, b)
}

pub fn fit_decay(lengths: &[usize], means: &[f64], weights: Option<&[f64]>) -> Result<DecayFit> {
    fit_decay_with(lengths, means, &FitOptions { weights: weights.map(<[f64]>::to_vec), standard_error: None })
}

pub fn fit_decay_with(lengths: &[usize], means: &[f64], opts: &FitOptions) -> Result<DecayFit> {
    if lengths.len() != means.len() {
        return Err(Error::InsufficientData(format!("{} lengths but {} means", lengths.len(), means.len())));
    }
    let mut distinct = lengths.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 4 {
        return Err(Error::InsufficientData(format!("need at least 4 distinct lengths, got {}", distinct.len())));
    }
    if lengths.iter().any(|&j| j == 0) {
        return Err(Error::OutOfRange("sequence lengths start at 1".into()));
    }
    if let Some(y) = means.iter().find(|y| !y.is_finite()) {
        return Err(Error::OutOfRange(format!("mean survival {y} is not finite")));
    }
    let ws = match &opts.weights {
        Some(w) if w.len() != means.len() => {
            return Err(Error::InsufficientData(format!("{} weights for {} points", w.len(), means.len())))
        }
        Some(w) if w.iter().any(|w| !(w.is_finite() && *w > 0.0)) => {
            return Err(Error::OutOfRange("weights must be positive and finite".into()))
        }
        Some(w) => w.clone(),
        None => vec![1.0; means.len()],
    };
    let se = opts.standard_error.unwrap_or_else(|| match &opts.weights {
        Some(w) => (w.iter().map(|w| 1.0 / w).sum::<f64>() / w.len() as f64).sqrt(),
        None => 0.0,
    });
    let (lo, hi) = means.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
    let level = means.iter().sum::<f64>() / means.len() as f64;
    if hi - lo < (10.0 * se).max(1e-12) {
        return Err(Error::FlatCurve { range: hi - lo, level });
    }

    // order by length so the heuristic sees the curve from its start
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| lengths[i]);
    let xs: Vec<f64> = order.iter().map(|&i| lengths[i] as f64 - 1.0).collect();
    let ys: Vec<f64> = order.iter().map(|&i| means[i]).collect();
    let ws: Vec<f64> = order.iter().map(|&i| ws[i]).collect();
    let prob = Problem { xs, ys: &ys, ws };

    let mut starts = vec![heuristic_start(&prob.xs, &ys)];
    let grid = (1..1000).map(|k| k as f64 / 1000.0).chain([0.9999, 0.99999]);
    if let Some((theta, _)) = grid
        .filter_map(|p| prob.linear_given_p(p))
        .min_by(|a, b| a.1.total_cmp(&b.1))
    {
        starts.push(theta);
    }
    let best = starts
        .into_iter()
        .map(|s| {
            let mut r = prob.lm(s);
            r.0 = prob.polish(r.0);
            r.3 = prob.normal(&r.0).1.norm();
            let c = prob.cost(&r.0);
            (r, c)
        })
        .min_by(|a, b| (!a.0 .2).cmp(&!b.0 .2).then(a.1.total_cmp(&b.1)))
        .expect("at least one start");
    let ((theta, iterations, converged, gradient_norm), cost) = best;

    let n = ys.len() as f64;
    let residual_rms = (prob.xs.iter().zip(&ys).map(|(&x, &y)| (y - model(&theta, x)).powi(2)).sum::<f64>() / n).sqrt();
    let (h, _) = prob.normal(&theta);
    let sigma2 = cost / (n - 3.0);
    let cov = h.try_inverse().map(|inv| inv * sigma2).unwrap_or_else(|| Matrix3::from_element(f64::NAN));
    let covariance = [0, 1, 2].map(|r| [0, 1, 2].map(|c| cov[(r, c)]));
    Ok(DecayFit { a0: theta[0], p: theta[1], b0: theta[2], residual_rms, covariance, iterations, converged, gradient_norm })
}

fn total_dim(d: u32, n: usize) -> f64 {
    (d as f64).powi(n as i32)
}

/// `r = (1 - p)(1 - 1/D)` with `D = d^n`.
pub fn error_rate_from_p(p: f64, d: u32, n: usize) -> f64 {
    (1.0 - p) * (1.0 - 1.0 / total_dim(d, n))
}

pub fn p_from_error_rate(r: f64, d: u32, n: usize) -> f64 {
    1.0 - r / (1.0 - 1.0 / total_dim(d, n))
}

/// `F = p + (1 - p)/D`.
pub fn average_fidelity_from_p(p: f64, d: u32, n: usize) -> f64 {
    p + (1.0 - p) / total_dim(d, n)
}

pub fn p_from_average_fidelity(f: f64, d: u32, n: usize) -> f64 {
    let dim = total_dim(d, n);
    (dim * f - 1.0) / (dim - 1.0)
}
