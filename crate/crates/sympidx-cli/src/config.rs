//! Resolved run configuration: tolerances, search parameters, seed and output
//! format, with uniform environment-variable overrides for the tolerances.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sympidx::Tolerances;

use crate::error::CliError;

/// Prefix of every environment variable that overrides a tolerance, e.g.
/// `SYMPIDX_TOL_SYM` or `SYMPIDX_Q_MAX`.
pub const ENV_PREFIX: &str = "SYMPIDX_";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

/// Parameters of the common index jump search and of the verifiers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub epsilon: f64,
    pub n_max: u64,
    pub want: usize,
    pub delta: f64,
    pub m_bar_override: Option<u64>,
    /// Iterate range `m̄` of the jump identities (and `--m` of `index`).
    pub m: u64,
    pub ell0: u64,
    pub eta: f64,
    pub dim_bound: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            epsilon: 1e-3,
            n_max: 10_000_000,
            want: 3,
            delta: 0.1,
            m_bar_override: None,
            m: 5,
            ell0: 5,
            eta: 0.5,
            dim_bound: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub search: SearchConfig,
    pub seed: u64,
    pub format: OutputFormat,
    /// Where the report goes; not part of the echoed configuration.
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: Tolerances::default(),
            search: SearchConfig::default(),
            seed: 0,
            format: OutputFormat::Json,
            output: None,
        }
    }
}

fn parse_env<T: std::str::FromStr>(name: &str, raw: &str) -> Result<T, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("environment variable {name}={raw:?} is not a valid value")))
}

impl RunConfig {
    /// Apply `SYMPIDX_*` tolerance overrides from `lookup`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), CliError> {
        let t = &mut self.tolerances;
        let floats: [(&str, &mut f64); 6] = [
            ("TOL_SYM", &mut t.tol_sym),
            ("TOL_RAT", &mut t.tol_rat),
            ("TOL_RANK", &mut t.tol_rank),
            ("TOL_UNIT", &mut t.tol_unit),
            ("TOL_UNDECIDED", &mut t.tol_undecided),
            ("CLUSTER_RADIUS", &mut t.cluster_radius),
        ];
        for (suffix, slot) in floats {
            let name = format!("{ENV_PREFIX}{suffix}");
            if let Some(raw) = lookup(&name) {
                *slot = parse_env(&name, &raw)?;
            }
        }
        let name = format!("{ENV_PREFIX}Q_MAX");
        if let Some(raw) = lookup(&name) {
            t.q_max = parse_env(&name, &raw)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.tolerances.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let s = &self.search;
        let check = |ok: bool, msg: String| if ok { Ok(()) } else { Err(CliError::Config(msg)) };
        check(s.epsilon > 0.0 && s.epsilon < 0.5, format!("--epsilon must lie in (0, 1/2), got {}", s.epsilon))?;
        check(s.delta > 0.0 && s.delta < 1.0, format!("--delta must lie in (0, 1), got {}", s.delta))?;
        check(s.eta > 0.0, format!("--eta must be positive, got {}", s.eta))?;
        check(s.n_max >= 1, "--n-max must be ≥ 1".into())?;
        check(s.want >= 1, "--want must be ≥ 1".into())?;
        check(s.m >= 1, "--m must be ≥ 1".into())?;
        check(s.ell0 >= 1, "--ell0 must be ≥ 1".into())?;
        check(s.dim_bound >= 2, "--dim-bound must be ≥ 2".into())?;
        check(s.m_bar_override != Some(0), "--m-bar-override must be ≥ 1".into())?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON form of the configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("configuration serializes");
        hex::encode(Sha256::digest(json))
    }
}
