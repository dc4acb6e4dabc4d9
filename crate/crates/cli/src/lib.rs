//! Command-line front-end for `mrp-core`: every subcommand builds a
//! serializable report, renders it as JSON or aligned text, and maps
//! failures to a documented exit code.

mod analyze;
mod error;
mod perturb;
mod simulate;
mod text;
mod verify;

use std::path::Path;

use serde::{Deserialize, Serialize};

use mrp_core::{Chain, Mrp};

pub use analyze::{cmd_analyze, AnalysisReport, BiasSection, Check};
pub use error::{code, CliError};
pub use perturb::{cmd_perturb, PerturbOptions, PerturbOutput, SubsetChoice};
pub use simulate::{cmd_simulate, SimulateOptions, SimulateReport};
pub use verify::{cmd_verify, Failure, Fault, PropertyCount, VerifyOptions, VerifyReport};

/// Overrides `--seed` when set.
pub const SEED_ENV: &str = "MRP_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Tolerance overrides. `None` keeps each check's own default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residuals of solved quantities (stationary, passage, Poisson).
    pub solve: Option<f64>,
    /// Inequality and constancy checks (Kemeny, span vs. diameter, bounds).
    pub check: Option<f64>,
}

impl Tolerances {
    pub(crate) fn solve_or(&self, default: f64) -> f64 {
        self.solve.unwrap_or(default)
    }

    pub(crate) fn check_or(&self, default: f64) -> f64 {
        self.check.unwrap_or(default)
    }
}

/// Tool version, seed and tolerance settings behind a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
}

impl Provenance {
    pub(crate) fn new(seed: Option<u64>, tolerances: Tolerances) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            tolerances,
        }
    }
}

/// A report with the violations that decide the exit status.
#[derive(Debug, Clone)]
pub struct Outcome<R> {
    pub report: R,
    pub violations: Vec<String>,
}

impl<R> Outcome<R> {
    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            code::VIOLATION
        }
    }
}

/// Text rendering of a report.
pub trait Render {
    fn render_text(&self) -> String;
}

/// Serializes a report in the requested format (JSON is pretty-printed with a trailing newline).
pub fn emit<R: Serialize + Render>(report: &R, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Text => report.render_text(),
    })
}

/// `MRP_SEED` if set, else `flag`.
pub fn resolve_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not a 64-bit seed"))),
        Err(_) => Ok(flag),
    }
}

pub(crate) fn load_chain(path: &Path) -> Result<(Chain, Option<Vec<f64>>), CliError> {
    let loaded = mrp_core::io::load(path).map_err(|source| CliError::Load {
        path: path.into(),
        source,
    })?;
    Ok((loaded.chain, loaded.reward))
}

/// Loads a unichain reward process; a file without rewards gets `r = 0`.
pub(crate) fn load_unichain(path: &Path) -> Result<Mrp, CliError> {
    let (chain, reward) = load_chain(path)?;
    if !chain.is_unichain() {
        let classes = chain
            .structure()
            .recurrent_classes
            .iter()
            .map(|c| c.iter().map(|&i| chain.label(i)).collect())
            .collect();
        return Err(CliError::NotUnichain {
            path: path.into(),
            classes,
        });
    }
    let n = chain.n();
    Mrp::new(chain, reward.unwrap_or_else(|| vec![0.0; n])).map_err(|source| CliError::Load {
        path: path.into(),
        source,
    })
}
