use std::path::Path;

use serde::{Deserialize, Serialize};

use mrp_core::bias::{bias_from_passage, poisson_residuals, poisson_solve, to_canonical};
use mrp_core::float_serde;
use mrp_core::passage::{
    diameter, first_passage_matrix, kemeny, passage_residual, return_time_check,
};
use mrp_core::solve::{average_reward, stationary, stationary_residual, steps_to_recurrence};
use mrp_core::{tol, KemenyResult, StateStructure};

use crate::error::StageExt;
use crate::{load_unichain, CliError, Outcome, Provenance, Tolerances};

pub(crate) const SIGN_CONVENTION: &str = "rho + lambda_i = r_i + sum_j p_ij lambda_j; canonical bias has sum_i mu_i lambda_i = 0; \
     passage_formula is lambda'_i = -sum_{j != i} mu_j r_j tau_ij, which differs from the canonical bias by a constant \
     on recurrent states and is off by r_i in the equation of a transient state i";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasSection {
    /// Poisson solve, `Σ μᵢ λᵢ = 0`.
    pub canonical: Vec<f64>,
    /// `λ'` from passage times, as computed.
    pub passage_formula: Vec<f64>,
    /// `λ'` shifted to the canonical gauge.
    pub passage_formula_canonical: Vec<f64>,
    pub sign_convention: String,
}

/// One numerical self-check: `value ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(with = "float_serde")]
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub(crate) fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub states: Vec<String>,
    /// Classification with 0-based state indices.
    pub structure: StateStructure,
    pub reward: Vec<f64>,
    pub mu: Vec<f64>,
    pub rho: f64,
    /// Mean first passage times; transient targets are `"inf"`.
    #[serde(with = "float_serde::nested")]
    pub tau: Vec<Vec<f64>>,
    pub bias: BiasSection,
    pub span: f64,
    #[serde(with = "float_serde")]
    pub diameter: f64,
    pub kemeny: KemenyResult<f64>,
    /// `ηᵢ − η`: expected steps to reach the recurrent class from `i`.
    pub transient_excess: Vec<f64>,
    pub checks: Vec<Check>,
    pub provenance: Provenance,
}

/// Classify, solve, compute passage times, both bias vectors and Kemeny's
/// constant, then self-check the results.
pub fn cmd_analyze(
    path: &Path,
    tolerances: Tolerances,
) -> Result<Outcome<AnalysisReport>, CliError> {
    let mrp = load_unichain(path)?;
    let chain = mrp.chain();
    let n = chain.n();

    let mu = stationary(chain).stage("solve")?;
    let rho = average_reward(&mrp, &mu).stage("solve")?;
    let tau = first_passage_matrix(chain, &mu).stage("passage")?;
    let canonical = poisson_solve(&mrp, &mu, rho).stage("bias")?;
    let passage_bias = bias_from_passage(&mrp, &mu, &tau).stage("bias")?;
    let shifted = to_canonical(&passage_bias, &mu);
    let k = kemeny(&tau, &mu).stage("passage")?;
    let d = diameter(&tau);
    let h = steps_to_recurrence(chain).stage("solve")?;

    let s = chain.structure();
    let residuals = poisson_residuals(&mrp, &passage_bias);
    let recurrent_residual = s
        .recurrent_states()
        .into_iter()
        .map(|i| residuals[i].abs())
        .fold(0.0, f64::max);
    let transient_identity = s
        .transient
        .iter()
        .map(|&i| (residuals[i] - mrp.reward()[i]).abs())
        .fold(0.0, f64::max);
    let agreement = s
        .recurrent_states()
        .into_iter()
        .map(|i| (canonical.values[i] - shifted.values[i]).abs())
        .fold(0.0, f64::max);
    let excess_gap = k
        .excess()
        .iter()
        .zip(&h)
        .map(|(e, h)| (e - h).abs())
        .fold(0.0, f64::max);
    let gauge: f64 = mu
        .as_slice()
        .iter()
        .zip(&canonical.values)
        .map(|(m, l)| m * l)
        .sum();

    let t = tolerances;
    let mut checks = vec![
        Check::new(
            "stationary_residual",
            stationary_residual(chain, mu.as_slice()),
            t.solve_or(tol::STATIONARY_RESIDUAL),
        ),
        Check::new(
            "passage_residual",
            passage_residual(chain, &tau),
            t.solve_or(tol::PASSAGE),
        ),
        Check::new(
            "return_time",
            return_time_check(&tau, &mu),
            t.solve_or(tol::PASSAGE),
        ),
        Check::new(
            "poisson_residual",
            poisson_residuals(&mrp, &canonical)
                .iter()
                .fold(0.0, |a, x| a.max(x.abs())),
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
        Check::new(
            "canonical_gauge",
            gauge.abs(),
            t.solve_or(tol::CANONICAL_GAUGE),
        ),
        Check::new(
            "passage_bias_recurrent_residual",
            recurrent_residual,
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
        Check::new(
            "passage_bias_transient_identity",
            transient_identity,
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
        Check::new(
            "bias_agreement",
            agreement,
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
        Check::new(
            "kemeny_constancy",
            k.max_deviation,
            t.check_or(tol::KEMENY_CONSTANCY),
        ),
        Check::new(
            "transient_excess",
            excess_gap,
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
    ];
    if mrp.rewards_in_unit_interval() && d.is_finite() {
        checks.push(Check::new(
            "span_minus_diameter",
            canonical.span() - d,
            t.check_or(tol::DIAMETER),
        ));
    }
    let violations = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} = {} exceeds {}", c.name, c.value, c.tolerance))
        .collect();

    let report = AnalysisReport {
        states: (0..n).map(|i| chain.label(i)).collect(),
        structure: s.clone(),
        reward: mrp.reward().to_vec(),
        mu: mu.as_slice().to_vec(),
        rho,
        tau: tau.matrix().to_rows(),
        span: canonical.span(),
        bias: BiasSection {
            canonical: canonical.values,
            passage_formula: passage_bias.values,
            passage_formula_canonical: shifted.values,
            sign_convention: SIGN_CONVENTION.into(),
        },
        diameter: d,
        transient_excess: k.excess(),
        kemeny: k,
        checks,
        provenance: Provenance::new(None, tolerances),
    };
    Ok(Outcome { report, violations })
}
