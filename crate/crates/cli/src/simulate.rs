use std::path::Path;

use serde::{Deserialize, Serialize};

use mrp_core::mcsim::{Lemma1Setup, ReplicaSummary};

use crate::error::StageExt;
use crate::{load_chain, load_unichain, CliError, Outcome, Provenance, Tolerances};

#[derive(Debug, Clone)]
pub struct SimulateOptions {
    pub ell: u64,
    pub deltas: Vec<f64>,
    pub replicas: u64,
    pub seed: u64,
    /// 0-based start state.
    pub start: usize,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        Self {
            ell: 10_000,
            deltas: vec![0.05],
            replicas: 1_000,
            seed: 0,
            start: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub start: usize,
    pub ell: u64,
    pub replicas: u64,
    pub rho: f64,
    /// Bias span of the original process.
    pub span: f64,
    pub inf_norm_delta: f64,
    /// Base of the logarithm in the concentration term.
    pub log: String,
    pub summaries: Vec<ReplicaSummary>,
    pub passed: bool,
    pub provenance: Provenance,
}

/// Runs seeded walks on the perturbed chain and counts how often the
/// accumulated-reward shortfall exceeds its finite-horizon bound.
pub fn cmd_simulate(
    original: &Path,
    perturbed: &Path,
    opts: &SimulateOptions,
) -> Result<Outcome<SimulateReport>, CliError> {
    let mrp = load_unichain(original)?;
    let (p_tilde, _) = load_chain(perturbed)?;
    if opts.deltas.is_empty() {
        return Err(CliError::Usage("at least one --delta is required".into()));
    }
    let setup = Lemma1Setup::new(&mrp, &p_tilde).stage("mcsim")?;
    let summaries = setup
        .run(opts.start, opts.ell, &opts.deltas, opts.replicas, opts.seed)
        .stage("mcsim")?;
    let violations = summaries
        .iter()
        .filter(|s| !s.passed)
        .map(|s| {
            format!(
                "delta {}: violation frequency {} exceeds {}",
                s.delta, s.frequency, s.tolerance
            )
        })
        .collect::<Vec<_>>();
    let report = SimulateReport {
        start: opts.start,
        ell: opts.ell,
        replicas: opts.replicas,
        rho: setup.rho,
        span: setup.span,
        inf_norm_delta: setup.delta_norm,
        log: "natural".into(),
        passed: violations.is_empty(),
        summaries,
        provenance: Provenance::new(Some(opts.seed), Tolerances::default()),
    };
    Ok(Outcome { report, violations })
}
