use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sequence::{generate_indexed_sequence, generate_sequence};
use super::simulate::{binomial_survival, overlap, propagate, Spam};
use crate::channels::KrausChannel;
use crate::clifford::{cached_group, clifford_group_order, CliffordTableau};
use crate::qudit_algebra::{check_prime, hilbert_dim, StateVector};
use crate::{Error, Result};

/// Groups up to this size are enumerated once and sampled by index; larger ones are
/// sampled tableau by tableau.
pub const ENUMERATION_LIMIT: u128 = 20_000;

pub const DATASET_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `num_copies` projective measurements per sequence.
    Sampled,
    /// Infinite-shot survival probability.
    Exact,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RBConfig {
    pub num_qudits: usize,
    pub dim: u32,
    /// Longest sequence; lengths run over `2..=max_len`.
    pub max_len: usize,
    pub num_seq: usize,
    pub num_copies: u64,
    pub noise: KrausChannel,
    pub spam_prep: Option<KrausChannel>,
    pub spam_meas: Option<KrausChannel>,
    pub seed: u64,
    pub mode: Mode,
    /// Computational basis index of the initial state; `|0...0>` when absent.
    pub initial_state: Option<usize>,
}

impl RBConfig {
    /// Sampled-mode defaults: `m = 20`, `k = 100`, `l = 1000`, seed 0, perfect SPAM.
    pub fn new(dim: u32, num_qudits: usize, noise: KrausChannel) -> Self {
        RBConfig {
            num_qudits,
            dim,
            max_len: 20,
            num_seq: 100,
            num_copies: 1000,
            noise,
            spam_prep: None,
            spam_meas: None,
            seed: 0,
            mode: Mode::Sampled,
            initial_state: None,
        }
    }

    pub fn hilbert_dim(&self) -> Result<usize> {
        hilbert_dim(self.dim, self.num_qudits)
    }

    pub fn validate(&self) -> Result<()> {
        check_prime(self.dim)?;
        if self.num_qudits == 0 {
            return Err(Error::Config("num_qudits must be positive".into()));
        }
        if self.max_len < 2 {
            return Err(Error::Config(format!("max_len must be at least 2, got {}", self.max_len)));
        }
        if self.num_seq == 0 || self.num_copies == 0 {
            return Err(Error::Config("num_seq and num_copies must be positive".into()));
        }
        let dim = self.hilbert_dim()?;
        for (name, ch) in [("noise", Some(&self.noise)), ("spam_prep", self.spam_prep.as_ref()), ("spam_meas", self.spam_meas.as_ref())] {
            if let Some(ch) = ch {
                if ch.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: format!("{name} of dimension {dim}"),
                        found: ch.dim().to_string(),
                    });
                }
            }
        }
        if let Some(s) = self.initial_state {
            if s >= dim {
                return Err(Error::Config(format!("initial_state {s} >= dimension {dim}")));
            }
        }
        Ok(())
    }

    pub fn spam(&self) -> Spam {
        Spam { prep: self.spam_prep.clone(), meas: self.spam_meas.clone() }
    }

    pub fn ideal_state(&self) -> Result<StateVector> {
        StateVector::basis(self.hilbert_dim()?, self.initial_state.unwrap_or(0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceRecord {
    pub length: usize,
    pub seq_index: usize,
    /// Element indices into the enumerated group, when one was used.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gate_indices: Option<Vec<usize>>,
    pub gates: Vec<CliffordTableau>,
    pub survival: f64,
    /// Measurement shots; 0 in exact mode.
    pub shots: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthData {
    pub length: usize,
    pub mean: f64,
    pub records: Vec<SequenceRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub code_version: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RBDataset {
    pub schema: u32,
    pub config: RBConfig,
    pub per_length: Vec<LengthData>,
    pub provenance: Provenance,
}

impl RBDataset {
    pub fn lengths(&self) -> Vec<usize> {
        self.per_length.iter().map(|l| l.length).collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.per_length.iter().map(|l| l.mean).collect()
    }

    /// Inverse binomial variance of each mean, from the pooled survival and the
    /// `k * l` outcomes behind it. `None` in exact mode.
    pub fn shot_weights(&self) -> Option<Vec<f64>> {
        if self.config.mode == Mode::Exact {
            return None;
        }
        let n = (self.config.num_seq as u64 * self.config.num_copies) as f64;
        Some(
            self.per_length
                .iter()
                .map(|l| {
                    let q = l.mean.clamp(0.5 / n, 1.0 - 0.5 / n);
                    n / (q * (1.0 - q))
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,seq_index,survival,shots\n");
        for rec in self.per_length.iter().flat_map(|l| &l.records) {
            writeln!(out, "{},{},{},{}", rec.length, rec.seq_index, rec.survival, rec.shots).expect("string write");
        }
        out
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Independent stream for sequence `i` of length `j`, fixed by the master seed alone.
pub fn sequence_rng(seed: u64, j: usize, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((j as u64) << 32) | i as u64);
    rng
}

pub fn run_rb(config: &RBConfig) -> Result<RBDataset> {
    config.validate()?;
    let (d, n) = (config.dim, config.num_qudits);
    let psi = config.ideal_state()?;
    let spam = config.spam();
    let rho = spam.prepared_state(&psi)?;
    let effect = spam.effect(&psi)?;
    let noise = config.noise.superoperator();
    let group = if clifford_group_order(d, n) <= ENUMERATION_LIMIT { Some(cached_group(d, n)?) } else { None };
    let dense = match &group {
        Some(g) => Some(g.dense_elements()?),
        None => None,
    };

    let tasks: Vec<(usize, usize)> =
        (2..=config.max_len).flat_map(|j| (0..config.num_seq).map(move |i| (j, i))).collect();
    let records = tasks
        .par_iter()
        .map(|&(j, i)| {
            let mut rng = sequence_rng(config.seed, j, i);
            let (indices, gates, q) = match (&group, dense) {
                (Some(g), Some(dense)) => {
                    let idx = generate_indexed_sequence(j, g, &mut rng)?;
                    let out = propagate(idx.iter().map(|&k| dense[k].matrix()), &noise, rho.matrix());
                    let gates = idx.iter().map(|&k| g.element(k).clone()).collect();
                    (Some(idx), gates, overlap(&effect, &out))
                }
                _ => {
                    let gates = generate_sequence(j, d, n, &mut rng)?;
                    let us = gates.iter().map(CliffordTableau::to_dense).collect::<Result<Vec<_>>>()?;
                    let out = propagate(us.iter().map(|u| u.matrix()), &noise, rho.matrix());
                    (None, gates, overlap(&effect, &out))
                }
            };
            let (survival, shots) = match config.mode {
                Mode::Exact => {
                    if !(q >= -1e-9) {
                        return Err(Error::NegativeProbability(q));
                    }
                    (q.clamp(0.0, 1.0), 0)
                }
                Mode::Sampled => (binomial_survival(q, config.num_copies, &mut rng)?, config.num_copies),
            };
            Ok(SequenceRecord { length: j, seq_index: i, gate_indices: indices, gates, survival, shots })
        })
        .collect::<Result<Vec<_>>>()?;

    let per_length = records
        .chunks(config.num_seq)
        .map(|chunk| LengthData {
            length: chunk[0].length,
            mean: chunk.iter().map(|r| r.survival).sum::<f64>() / chunk.len() as f64,
            records: chunk.to_vec(),
        })
        .collect();
    Ok(RBDataset {
        schema: DATASET_SCHEMA,
        config: config.clone(),
        per_length,
        provenance: Provenance { seed: config.seed, code_version: env!("CARGO_PKG_VERSION").to_string() },
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing;

    fn config(mode: Mode) -> RBConfig {
        let mut c = RBConfig::new(3, 1, depolarizing(0.95, 3).unwrap());
        c.max_len = 8;
        c.num_seq = 5;
        c.num_copies = 200;
        c.mode = mode;
        c.seed = 11;
        c
    }

    #[test]
    fn exact_mode_matches_closed_form() {
        let ds = run_rb(&config(Mode::Exact)).unwrap();
        assert_eq!(ds.lengths(), (2..=8).collect::<Vec<_>>());
        for l in &ds.per_length {
            let expect = 0.95f64.powi(l.length as i32 - 1) * 0.95 * (2.0 / 3.0) + 1.0 / 3.0;
            assert!((l.mean - expect).abs() < 1e-10);
            assert!(l.records.iter().all(|r| r.shots == 0));
        }
    }

    #[test]
    fn deterministic_and_consistent() {
        let a = run_rb(&config(Mode::Sampled)).unwrap();
        let b = run_rb(&config(Mode::Sampled)).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        for l in &a.per_length {
            let mean = l.records.iter().map(|r| r.survival).sum::<f64>() / l.records.len() as f64;
            assert_eq!(mean, l.mean);
        }
        let csv = a.to_csv();
        assert_eq!(csv.lines().count(), 1 + 7 * 5);
        let back = RBDataset::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(back.per_length, a.per_length);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = config(Mode::Exact);
        c.dim = 4;
        assert!(matches!(run_rb(&c), Err(Error::NonPrimeDimension(4))));
        let mut c = config(Mode::Exact);
        c.max_len = 1;
        assert!(run_rb(&c).is_err());
        let mut c = config(Mode::Exact);
        c.noise = depolarizing(0.9, 2).unwrap();
        assert!(matches!(run_rb(&c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn large_groups_use_tableau_sampling() {
        let mut c = RBConfig::new(2, 3, KrausChannel::identity(8));
        c.max_len = 3;
        c.num_seq = 2;
        c.mode = Mode::Exact;
        let ds = run_rb(&c).unwrap();
        for l in &ds.per_length {
            assert!((l.mean - 1.0).abs() < 1e-10);
            assert!(l.records.iter().all(|r| r.gate_indices.is_none()));
        }
    }
}
