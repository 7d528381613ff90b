use std::path::{Path, PathBuf};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Deserialize;

use crate::channels::{depolarizing, KrausChannel};
use crate::qudit_algebra::{check_prime, gate, hilbert_dim, CMatrix, DenseUnitary, GateKind};
use crate::rb::{Mode, RBConfig};
use crate::{Error, Result};

/// Noise model selector of an experiment file.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NoiseSpec {
    /// No noise.
    None,
    /// `rho -> p rho + (1 - p) 1/D` on the whole register.
    Depolarizing { p: f64 },
    /// `exp(-i angle (X + X^dag) / 2)` on every qudit.
    OverRotation { angle: f64 },
    /// Kraus operators from a JSON file, relative to the experiment file.
    KrausFile { path: PathBuf },
}

/// Experiment file contents (TOML).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub d: u32,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(default = "default_max_len")]
    pub max_len: usize,
    #[serde(default = "default_num_seq")]
    pub num_seq: usize,
    #[serde(default = "default_num_copies")]
    pub num_copies: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    pub initial_state: Option<usize>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub emit_plot: bool,
    #[serde(default)]
    pub log_y: bool,
    pub noise: NoiseSpec,
    pub prep_noise: Option<NoiseSpec>,
    pub meas_noise: Option<NoiseSpec>,
    /// Directory of the experiment file, for relative paths.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn one() -> usize {
    1
}
fn default_max_len() -> usize {
    20
}
fn default_num_seq() -> usize {
    100
}
fn default_num_copies() -> u64 {
    1000
}
fn default_mode() -> Mode {
    Mode::Sampled
}

/// `exp(-i angle (X + X^dag) / 2)` for one qudit.
pub fn over_rotation(d: u32, angle: f64) -> Result<DenseUnitary> {
    let x = gate(GateKind::X, d)?;
    let h = x.matrix() + x.matrix().adjoint();
    let eig = h.symmetric_eigen();
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -angle * l / 2.0)),
    );
    let v = &eig.eigenvectors;
    let u: CMatrix = v * CMatrix::from_diagonal(&phases) * v.adjoint();
    DenseUnitary::new(u)
}

impl NoiseSpec {
    pub fn build(&self, d: u32, n: usize, base_dir: &Path) -> Result<KrausChannel> {
        let dim = hilbert_dim(d, n)?;
        let ch = match self {
            NoiseSpec::None => KrausChannel::identity(dim),
            NoiseSpec::Depolarizing { p } => depolarizing(*p, dim)?,
            NoiseSpec::OverRotation { angle } => {
                let one = over_rotation(d, *angle)?;
                let mut u = one.clone();
                for _ in 1..n {
                    u = u.kron(&one);
                }
                KrausChannel::unitary(&u)
            }
            NoiseSpec::KrausFile { path } => {
                let full = base_dir.join(path);
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Error::Config(format!("cannot read Kraus file {}: {e}", full.display())))?;
                KrausChannel::from_json(&text)
                    .map_err(|e| Error::Config(format!("Kraus file {}: {e}", full.display())))?
            }
        };
        if ch.dim() != dim {
            return Err(Error::DimensionMismatch { expected: format!("channel of dimension {dim}"), found: ch.dim().to_string() });
        }
        Ok(ch)
    }
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut spec = Self::parse(&text)?;
        spec.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(spec)
    }

    pub fn to_config(&self) -> Result<RBConfig> {
        check_prime(self.d)?;
        let build = |s: &NoiseSpec, what: &str| {
            s.build(self.d, self.n, &self.base_dir).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("[{what}] {m}")),
                Error::OutOfRange(m) => Error::Config(format!("[{what}] {m}")),
                other => other,
            })
        };
        let config = RBConfig {
            num_qudits: self.n,
            dim: self.d,
            max_len: self.max_len,
            num_seq: self.num_seq,
            num_copies: self.num_copies,
            noise: build(&self.noise, "noise")?,
            spam_prep: self.prep_noise.as_ref().map(|s| build(s, "prep_noise")).transpose()?,
            spam_meas: self.meas_noise.as_ref().map(|s| build(s, "meas_noise")).transpose()?,
            seed: self.seed,
            mode: self.mode,
            initial_state: self.initial_state,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
d = 3
max_len = 10
mode = "exact"

[noise]
model = "depolarizing"
p = 0.95

[prep_noise]
model = "over-rotation"
angle = 0.1
"#;

    #[test]
    fn parses_sample() {
        let spec = ExperimentSpec::parse(SAMPLE).unwrap();
        assert_eq!(spec.n, 1);
        assert_eq!(spec.num_seq, 100);
        assert_eq!(spec.mode, Mode::Exact);
        assert_eq!(spec.noise, NoiseSpec::Depolarizing { p: 0.95 });
        let cfg = spec.to_config().unwrap();
        assert_eq!(cfg.noise.dim(), 3);
        assert!(cfg.spam_prep.is_some() && cfg.spam_meas.is_none());
    }

    #[test]
    fn errors_name_the_field() {
        let err = ExperimentSpec::parse("d = 3\nmax_len = \"x\"\n[noise]\nmodel = \"none\"\n").unwrap_err();
        assert!(err.to_string().contains("max_len"), "{err}");
        let err = ExperimentSpec::parse("d = 3\n[noise]\nmodel = \"bogus\"\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let spec = ExperimentSpec::parse("d = 4\n[noise]\nmodel = \"none\"\n").unwrap();
        assert!(matches!(spec.to_config(), Err(Error::NonPrimeDimension(4))));
        let spec = ExperimentSpec::parse("d = 3\n[noise]\nmodel = \"depolarizing\"\np = 2.0\n").unwrap();
        assert!(spec.to_config().unwrap_err().to_string().contains("[noise]"));
    }

    #[test]
    fn over_rotation_is_unitary_and_small() {
        let u = over_rotation(3, 0.0).unwrap();
        assert!((u.matrix() - CMatrix::identity(3, 3)).norm() < 1e-12);
        let u = over_rotation(3, 0.05).unwrap();
        let f = KrausChannel::unitary(&u).average_fidelity();
        assert!(f < 1.0 && f > 0.99);
        // qubit case is a plain X rotation
        let u = over_rotation(2, 0.3).unwrap();
        assert!((u.matrix()[(0, 0)].re - 0.3f64.cos()).abs() < 1e-12);
    }
}
