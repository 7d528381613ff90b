use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{group_frame_potential, haar::random_channel, is_depolarizing, twirl};
use crate::clifford::{clifford_group_order, enumerate_group, read_group_cache, write_group_cache, CliffordGroupTable};
use crate::fitting::p_from_average_fidelity;
use crate::qudit_algebra::{symmetric_counterexample, CMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Design,
    Counterexample,
    Cardinality,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "design" => Ok(Suite::Design),
            "counterexample" => Ok(Suite::Counterexample),
            "cardinality" => Ok(Suite::Cardinality),
            other => Err(Error::Config(format!(
                "unknown suite '{other}', expected design, counterexample or cardinality"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub lines: Vec<String>,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: String) {
        if !ok {
            self.failures.push(what.clone());
        }
        self.lines.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn format_matrix(m: &CMatrix) -> Vec<String> {
    (0..m.nrows())
        .map(|r| {
            let cells: Vec<String> = (0..m.ncols())
                .map(|c| {
                    let z = m[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            format!("  [{}]", cells.join(", "))
        })
        .collect()
}

pub fn cmd_verify(suite: Suite) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    match suite {
        Suite::Cardinality => {
            let mut sizes = Vec::new();
            let mut all = true;
            for d in [2, 3, 5] {
                let g = enumerate_group(d, 1)?;
                let expected = clifford_group_order(d, 1);
                let ok = g.len() as u128 == expected;
                all &= ok;
                rep.check(ok, format!("d={d}, n=1: {} elements, d^3 (d^2 - 1) = {expected}", g.len()));
                sizes.push(g.len().to_string());
            }
            rep.lines.push(format!("{}: {}", sizes.join(", "), if all { "all match" } else { "MISMATCH" }));
        }
        Suite::Counterexample => {
            let ce = symmetric_counterexample()?;
            rep.lines.push("symmetric block R of H (x) H:".into());
            rep.lines.extend(format_matrix(&ce.block.sym));
            rep.lines.push(format!("antisymmetric entry: {:+.6}", ce.block.antisym.re));
            rep.lines.push("R X_3 R^dag:".into());
            rep.lines.extend(format_matrix(&ce.conjugated));
            rep.check(ce.block.offdiag_norm < 1e-12, format!("block diagonal (off-diagonal norm {:e})", ce.block.offdiag_norm));
            let verdict = if ce.membership.is_none() { "absent" } else { "present" };
            rep.lines.push(format!("membership of R X_3 R^dag in the qutrit Pauli group: {verdict}"));
            rep.check(ce.membership.is_none(), "R X_3 R^dag is not a qutrit Pauli".into());
            rep.check(ce.membership_undaggered.is_none(), "R X_3 R is not a qutrit Pauli".into());
        }
        Suite::Design => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for d in [2u32, 3] {
                let g = enumerate_group(d, 1)?;
                let fp = group_frame_potential(&g)?;
                rep.check((fp - 2.0).abs() < 1e-9, format!("d={d}: frame potential {fp:.12}"));
                let dim = d as usize;
                let ch = random_channel(dim, dim, &mut rng);
                let t = twirl(&ch, &g)?;
                let expected = p_from_average_fidelity(ch.average_fidelity(), d, 1);
                match is_depolarizing(&t, 1e-9) {
                    Some(p) => rep.check(
                        (p - expected).abs() < 1e-9,
                        format!("d={d}: twirl of a random channel is depolarizing, p = {p:.12} (expected {expected:.12})"),
                    ),
                    None => rep.check(false, format!("d={d}: twirl of a random channel is not depolarizing")),
                }
            }
        }
    }
    Ok(rep)
}

/// Enumerates the group, reading it from `cache` when the file exists and writing it
/// there otherwise.
pub fn cmd_enumerate(d: u32, n: usize, cache: Option<&Path>) -> Result<(CliffordGroupTable, String)> {
    if let Some(path) = cache {
        if path.exists() {
            let g = read_group_cache(path)?;
            if g.d() != d || g.num_qudits() != n {
                return Err(Error::CacheFormat(format!(
                    "{} holds d={}, n={}, not d={d}, n={n}",
                    path.display(),
                    g.d(),
                    g.num_qudits()
                )));
            }
            let msg = format!("loaded {} elements from {}", g.len(), path.display());
            return Ok((g, msg));
        }
    }
    let g = enumerate_group(d, n)?;
    let mut msg = format!("enumerated {} elements for d={d}, n={n}", g.len());
    if let Some(path) = cache {
        write_group_cache(&g, path)?;
        msg.push_str(&format!("; cache written to {}", path.display()));
    }
    Ok((g, msg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for s in ["cardinality", "counterexample", "design"] {
            let rep = cmd_verify(s.parse().unwrap()).unwrap();
            assert!(rep.passed(), "{s}: {:?}", rep.failures);
        }
        let card = cmd_verify(Suite::Cardinality).unwrap();
        assert_eq!(card.lines.last().unwrap(), "24, 216, 3000: all match");
        let ce = cmd_verify(Suite::Counterexample).unwrap();
        assert!(ce.lines.iter().any(|l| l.ends_with("group: absent")));
        assert!("other".parse::<Suite>().is_err());
    }
}
