use std::path::{Path, PathBuf};

use serde::Serialize;

use super::plot::decay_svg;
use super::spec::ExperimentSpec;
use crate::fitting::{average_fidelity_from_p, error_rate_from_p, fit_decay_with, DecayFit, FitOptions};
use crate::qudit_algebra::hilbert_dim;
use crate::rb::{run_rb, Mode, RBDataset};
use crate::{Error, Result};

/// Command-line overrides for `run`.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub exact: bool,
    pub out: Option<PathBuf>,
    pub emit_plot: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub d: u32,
    pub n: usize,
    pub p_hat: f64,
    pub a0_hat: f64,
    pub b0_hat: f64,
    pub r_hat: f64,
    pub average_fidelity: f64,
    /// Set when the curve shows no resolvable decay; `p_hat` is then 1 or 0 depending
    /// on whether the level sits nearer the ideal survival or the fully mixed value.
    pub flat_curve: bool,
    pub fit: Option<DecayFit>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub dataset: RBDataset,
    pub report: FitReport,
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Pooled standard error of the per-length means.
fn mean_standard_error(ds: &RBDataset) -> f64 {
    let k = ds.config.num_seq as f64;
    let vars: Vec<f64> = ds
        .per_length
        .iter()
        .map(|l| {
            if l.records.len() >= 2 {
                let var = l.records.iter().map(|r| (r.survival - l.mean).powi(2)).sum::<f64>() / (k - 1.0);
                var / k
            } else if ds.config.mode == Mode::Sampled {
                l.mean * (1.0 - l.mean) / ds.config.num_copies as f64
            } else {
                0.0
            }
        })
        .collect();
    (vars.iter().sum::<f64>() / vars.len() as f64).sqrt()
}

pub fn fit_report(ds: &RBDataset) -> Result<FitReport> {
    let (d, n) = (ds.config.dim, ds.config.num_qudits);
    let dim = hilbert_dim(d, n)? as f64;
    let opts = FitOptions { weights: None, standard_error: Some(mean_standard_error(ds)) };
    let (fit, flat, p, a0, b0) = match fit_decay_with(&ds.lengths(), &ds.means(), &opts) {
        Ok(f) => (Some(f.clone()), false, f.p, f.a0, f.b0),
        Err(Error::FlatCurve { level, .. }) => {
            let p = if level > 0.5 * (1.0 + 1.0 / dim) { 1.0 } else { 0.0 };
            (None, true, p, 0.0, level)
        }
        Err(e) => return Err(e),
    };
    Ok(FitReport {
        d,
        n,
        p_hat: p,
        a0_hat: a0,
        b0_hat: b0,
        r_hat: error_rate_from_p(p, d, n),
        average_fidelity: average_fidelity_from_p(p, d, n),
        flat_curve: flat,
        fit,
    })
}

/// Runs the experiment described by `spec_path` and writes `dataset.json`,
/// `dataset.csv`, `fit.json` and optionally `decay.svg`.
pub fn cmd_run(spec_path: &Path, opts: &RunOptions) -> Result<RunOutcome> {
    let spec = ExperimentSpec::load(spec_path)?;
    let mut config = spec.to_config()?;
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    if opts.exact {
        config.mode = Mode::Exact;
    }
    let out_dir = opts
        .out
        .clone()
        .or_else(|| spec.output.as_ref().map(|o| spec.base_dir.join(o)))
        .unwrap_or_else(|| PathBuf::from("qrb-out"));
    std::fs::create_dir_all(&out_dir)?;

    let dataset = run_rb(&config)?;
    let report = fit_report(&dataset)?;
    let mut files = Vec::new();
    let mut write = |name: &str, body: String| -> Result<()> {
        let path = out_dir.join(name);
        std::fs::write(&path, body)?;
        files.push(path);
        Ok(())
    };
    write("dataset.json", dataset.to_json()?)?;
    write("dataset.csv", dataset.to_csv())?;
    write("fit.json", serde_json::to_string_pretty(&report)?)?;
    if opts.emit_plot || spec.emit_plot {
        write("decay.svg", decay_svg(&dataset.lengths(), &dataset.means(), report.fit.as_ref(), spec.log_y))?;
    }
    Ok(RunOutcome { dataset, report, out_dir, files })
}
