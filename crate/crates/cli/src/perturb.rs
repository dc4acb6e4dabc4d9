use std::path::Path;

use serde::{Deserialize, Serialize};

use mrp_core::perturb::{build_report_with, Starts, EXACT_SUBSET_LIMIT};
use mrp_core::{tol, PerturbationReport, SubsetMode};

use crate::error::StageExt;
use crate::{load_chain, load_unichain, CliError, Outcome, Provenance, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubsetChoice {
    /// Exact up to the enumeration limit, sampled beyond it.
    #[default]
    Auto,
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Default)]
pub struct PerturbOptions {
    pub subsets: SubsetChoice,
    /// 0-based start state of `P̃`; `None` covers every start.
    pub start: Option<usize>,
    /// Seed of the sampled subset search.
    pub seed: u64,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbOutput {
    pub report: PerturbationReport<f64>,
    pub provenance: Provenance,
}

/// Compares every perturbation bound of the original chain with the actual
/// deviation of the perturbed chain's limiting distribution.
pub fn cmd_perturb(
    original: &Path,
    perturbed: &Path,
    opts: &PerturbOptions,
) -> Result<Outcome<PerturbOutput>, CliError> {
    let mrp = load_unichain(original)?;
    let (p_tilde, _) = load_chain(perturbed)?;
    if p_tilde.n() != mrp.n() {
        return Err(CliError::Usage(format!(
            "{} has {} states but {} has {}",
            perturbed.display(),
            p_tilde.n(),
            original.display(),
            mrp.n()
        )));
    }
    let recurrent = mrp.chain().structure().recurrent_states().len();
    let mode = match opts.subsets {
        SubsetChoice::Exact => SubsetMode::Exact,
        SubsetChoice::Auto if recurrent <= EXACT_SUBSET_LIMIT => SubsetMode::Exact,
        _ => SubsetMode::Sampled { seed: opts.seed },
    };
    let starts = opts.start.map_or(Starts::All, Starts::One);
    let slack = opts.tolerances.check_or(tol::BOUND);
    let report = build_report_with(&mrp, &p_tilde, mode, starts, slack).stage("perturb")?;
    let seed = matches!(mode, SubsetMode::Sampled { .. }).then_some(opts.seed);
    Ok(Outcome {
        violations: report.violations.clone(),
        report: PerturbOutput {
            report,
            provenance: Provenance::new(seed, opts.tolerances),
        },
    })
}
