use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use mrp_core::bias::{bias_from_passage, poisson_residuals, poisson_solve, to_canonical};
use mrp_core::io::ChainFile;
use mrp_core::mcsim::{rng_for, simulate};
use mrp_core::model::{generate_perturbation, generate_random_unichain};
use mrp_core::passage::{
    diameter, first_passage_matrix, kemeny, passage_residual, return_time_check,
};
use mrp_core::perturb::{build_report_with, corollary_subset_bound, Starts, EXACT_SUBSET_LIMIT};
use mrp_core::solve::{stationary, stationary_residual, steps_to_recurrence};
use mrp_core::{tol, Chain, Mrp, SubsetMode};

use crate::{CliError, Outcome, Provenance, Tolerances};

/// Deliberate defects for checking that the suite catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the passage-time bias formula.
    NegatePassageBias,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub trials: u64,
    pub max_n: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCount {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub property: String,
    pub seed: u64,
    pub detail: String,
    pub instance: ChainFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub trials: u64,
    pub max_n: usize,
    pub properties: Vec<PropertyCount>,
    /// The first failures in trial order.
    pub failures: Vec<Failure>,
    pub total_failures: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub passed: bool,
    pub provenance: Provenance,
}

const MAX_REPORTED_FAILURES: usize = 20;

const PROPERTIES: [&str; 11] = [
    "classification",
    "stationary",
    "passage",
    "kemeny_constancy",
    "transient_excess",
    "poisson_residual",
    "passage_bias_residual",
    "bias_agreement",
    "span_diameter",
    "perturbation_bounds",
    "visit_conservation",
];

/// Result of one property on one instance: `Err` carries the diagnostic.
type Verdict = Result<(), String>;

struct Trial {
    seed: u64,
    instance: ChainFile,
    verdicts: Vec<(usize, Verdict)>,
}

/// Random unichain instance: `1 ≤ n ≤ max_n`, up to 3 transient states,
/// rewards uniform in `[−1, 1]`.
pub(crate) fn instance(seed: u64, max_n: usize) -> Result<Mrp, mrp_core::Error> {
    let mut rng = rng_for(seed ^ 0x243f_6a88_85a3_08d3);
    let n = rng.random_range(1..=max_n);
    let transient = rng.random_range(0..=3.min(n - 1));
    let density = rng.random_range(0.2..=1.0);
    let chain: Chain = generate_random_unichain(n, density, transient, seed)?;
    let reward = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    Mrp::new(chain, reward)
}

fn within(name: &str, value: f64, tolerance: f64) -> Verdict {
    if value <= tolerance {
        Ok(())
    } else {
        Err(format!("{name} = {value:e} exceeds {tolerance:e}"))
    }
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn run_trial(seed: u64, opts: &VerifyOptions) -> Trial {
    let mrp = match instance(seed, opts.max_n) {
        Ok(m) => m,
        Err(e) => {
            return Trial {
                seed,
                instance: ChainFile {
                    states: None,
                    p: vec![],
                    r: None,
                },
                verdicts: vec![(0, Err(format!("instance generation failed: {e}")))],
            }
        }
    };
    let instance = ChainFile::from_chain(mrp.chain(), Some(mrp.reward()));
    let mut verdicts = Vec::with_capacity(PROPERTIES.len());
    if let Err(e) = check_all(&mrp, seed, opts, &mut verdicts) {
        let next = verdicts.len().min(PROPERTIES.len() - 1);
        verdicts.push((next, Err(format!("numerical failure: {e}"))));
    }
    Trial {
        seed,
        instance,
        verdicts,
    }
}

fn check_all(
    mrp: &Mrp,
    seed: u64,
    opts: &VerifyOptions,
    out: &mut Vec<(usize, Verdict)>,
) -> Result<(), mrp_core::Error> {
    let t = opts.tolerances;
    let chain = mrp.chain();
    let s = chain.structure();
    let n = chain.n();

    let mut members: Vec<usize> = s.recurrent_states();
    members.extend(&s.transient);
    members.sort_unstable();
    out.push((
        0,
        if members == (0..n).collect::<Vec<_>>() && s.is_unichain {
            Ok(())
        } else {
            Err(format!("classification is not a unichain partition: {s:?}"))
        },
    ));

    let mu = stationary(chain)?;
    let mass: f64 = mu.as_slice().iter().sum();
    out.push((
        1,
        within(
            "stationary residual",
            stationary_residual(chain, mu.as_slice()),
            t.solve_or(tol::STATIONARY_RESIDUAL),
        )
        .and(within(
            "|sum mu - 1|",
            (mass - 1.0).abs(),
            t.solve_or(tol::MU_SUM),
        )),
    ));

    let tau = first_passage_matrix(chain, &mu)?;
    out.push((
        2,
        within(
            "passage residual",
            passage_residual(chain, &tau),
            t.solve_or(tol::PASSAGE),
        )
        .and(within(
            "|tau_ii - 1/mu_i|",
            return_time_check(&tau, &mu),
            t.solve_or(tol::PASSAGE),
        )),
    ));

    let k = kemeny(&tau, &mu)?;
    out.push((
        3,
        within(
            "Kemeny spread",
            k.max_deviation,
            t.check_or(tol::KEMENY_CONSTANCY),
        ),
    ));
    let h = steps_to_recurrence(chain)?;
    out.push((
        4,
        within(
            "transient excess vs. absorption time",
            max_abs(k.excess().iter().zip(&h).map(|(e, h)| e - h)),
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
    ));

    let rho = mrp.rho()?;
    let canonical = poisson_solve(mrp, &mu, rho)?;
    out.push((
        5,
        within(
            "Poisson residual",
            max_abs(poisson_residuals(mrp, &canonical)),
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
    ));

    let mut passage_bias = bias_from_passage(mrp, &mu, &tau)?;
    if opts.fault == Some(Fault::NegatePassageBias) {
        passage_bias.values.iter_mut().for_each(|v| *v = -*v);
    }
    let res = poisson_residuals(mrp, &passage_bias);
    // at a transient state the passage formula is off by exactly the reward
    let dev = (0..n).map(|i| {
        if s.is_transient(i) {
            res[i] - mrp.reward()[i]
        } else {
            res[i]
        }
    });
    out.push((
        6,
        within(
            "Poisson residual of passage-time bias",
            max_abs(dev),
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
    ));

    let shifted = to_canonical(&passage_bias, &mu);
    out.push((
        7,
        within(
            "bias disagreement on recurrent states",
            max_abs(
                s.recurrent_states()
                    .into_iter()
                    .map(|i| canonical.values[i] - shifted.values[i]),
            ),
            t.solve_or(tol::POISSON_RESIDUAL),
        ),
    ));

    let unit = mrp.with_reward(mrp.reward().iter().map(|r| (r + 1.0) / 2.0).collect())?;
    let unit_span = poisson_solve(&unit, &mu, unit.rho()?)?.span();
    let d = diameter(&tau);
    let ok = d.is_infinite() || unit_span <= d + t.check_or(tol::DIAMETER);
    out.push((
        8,
        if ok {
            Ok(())
        } else {
            Err(format!("span {unit_span} exceeds diameter {d}"))
        },
    ));

    let mut rng = rng_for(seed ^ 0x9e37_79b9);
    let magnitude = rng.random_range(0.0..=2.0);
    let p_tilde = generate_perturbation(chain, magnitude, seed.is_multiple_of(2), seed)?;
    let recurrent = s.recurrent_states().len();
    let mode = if recurrent <= EXACT_SUBSET_LIMIT {
        SubsetMode::Exact
    } else {
        SubsetMode::Sampled { seed }
    };
    let report = build_report_with(mrp, &p_tilde, mode, Starts::All, t.check_or(tol::BOUND))?;
    let sampled = corollary_subset_bound(
        &mu,
        &tau,
        report.inf_norm_delta,
        SubsetMode::Sampled { seed },
    )?;
    let mut problems = report.violations;
    if mode == SubsetMode::Exact && sampled.bound > report.corollary_l1_bound {
        problems.push(format!(
            "sampled subset bound {} exceeds exact {}",
            sampled.bound, report.corollary_l1_bound
        ));
    }
    out.push((
        9,
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems.join("; "))
        },
    ));

    let ell = 64;
    let walk = simulate(&p_tilde, rng.random_range(0..n), ell, seed)?;
    let total: u64 = walk.visits.iter().sum();
    out.push((
        10,
        if total == ell {
            Ok(())
        } else {
            Err(format!("{total} visits over {ell} steps"))
        },
    ));
    Ok(())
}

/// Runs every property suite on `trials` random instances with seeds
/// `seed, seed + 1, …`.
pub fn cmd_verify(opts: &VerifyOptions) -> Result<Outcome<VerifyReport>, CliError> {
    if opts.max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let trials: Vec<Trial> = (0..opts.trials)
        .into_par_iter()
        .map(|k| run_trial(opts.seed.wrapping_add(k), opts))
        .collect();

    let mut properties: Vec<PropertyCount> = PROPERTIES
        .iter()
        .map(|p| PropertyCount {
            name: (*p).into(),
            checked: 0,
            failed: 0,
        })
        .collect();
    let mut failures = Vec::new();
    let mut total_failures = 0;
    for trial in &trials {
        for (p, verdict) in &trial.verdicts {
            properties[*p].checked += 1;
            if let Err(detail) = verdict {
                properties[*p].failed += 1;
                total_failures += 1;
                if failures.len() < MAX_REPORTED_FAILURES {
                    failures.push(Failure {
                        property: PROPERTIES[*p].into(),
                        seed: trial.seed,
                        detail: detail.clone(),
                        instance: trial.instance.clone(),
                    });
                }
            }
        }
    }
    let violations = failures
        .iter()
        .map(|f| format!("{} failed on seed {}: {}", f.property, f.seed, f.detail))
        .collect();
    let report = VerifyReport {
        trials: opts.trials,
        max_n: opts.max_n,
        properties,
        failures,
        total_failures,
        warning: (opts.trials == 0).then(|| "no trials requested; the pass is vacuous".to_string()),
        passed: total_failures == 0,
        provenance: Provenance::new(Some(opts.seed), opts.tolerances),
    };
    Ok(Outcome { report, violations })
}
