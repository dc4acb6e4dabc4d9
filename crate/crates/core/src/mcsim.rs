//! Seeded Monte Carlo trajectories.
//!
//! Every trajectory draws from a ChaCha8 stream seeded with a 64-bit seed;
//! replica `k` of a batch uses `base_seed + k` (wrapping). Transitions are
//! sampled by inverse CDF over the current row.
//!
//! The finite-horizon check compares `ℓρ − Σᵢ vᵢ rᵢ` for a walk on `P̃` with
//! `(ℓ/2) span(λ) ‖P − P̃‖∞ + span(λ)(1 + √(2ℓ ln(1/δ)))`, where `ρ` and `λ`
//! belong to the unperturbed process. The bound holds with probability at
//! least `1 − δ` (Azuma–Hoeffding, natural logarithm).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bias::poisson_solve;
use crate::perturb::inf_norm_delta;
use crate::solve::{limiting_distribution, stationary};
use crate::{linalg, ChainModel, Error, MrpModel, Result, Scalar};

/// Horizon used by [`rho_convergence_check`].
pub const CONVERGENCE_HORIZON: u64 = 1_000_000;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn replica_seed(base: u64, replica: u64) -> u64 {
    base.wrapping_add(replica)
}

/// Precomputed per-row cumulative distributions.
#[derive(Debug, Clone)]
pub struct Simulator {
    cdf: Vec<Vec<f64>>,
    last: Vec<usize>,
}

impl Simulator {
    pub fn new<T: Scalar>(chain: &ChainModel<T>) -> Self {
        let mut cdf = Vec::with_capacity(chain.n());
        let mut last = Vec::with_capacity(chain.n());
        for row in chain.transition().iter_rows() {
            let mut acc = 0.0;
            cdf.push(
                row.iter()
                    .map(|p| {
                        acc += p.as_f64();
                        acc
                    })
                    .collect(),
            );
            last.push(
                row.iter()
                    .rposition(|&p| p > T::zero())
                    .expect("stochastic row"),
            );
        }
        Self { cdf, last }
    }

    pub fn n(&self) -> usize {
        self.cdf.len()
    }

    #[inline]
    pub fn step<R: Rng>(&self, state: usize, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let row = &self.cdf[state];
        let k = row.partition_point(|&c| c <= u);
        if k >= row.len() {
            self.last[state]
        } else {
            k
        }
    }

    /// Visit counts over steps `1..=ell`, the start being the step-1 visit.
    pub fn visits<R: Rng>(&self, start: usize, ell: u64, rng: &mut R) -> Vec<u64> {
        let mut v = vec![0u64; self.n()];
        let mut s = start;
        v[s] += 1;
        for _ in 1..ell {
            s = self.step(s, rng);
            v[s] += 1;
        }
        v
    }

    /// First time `t ≥ 1` the walk from `start` is in each tracked state
    /// (`None` if not reached within `max_steps` transitions).
    pub fn first_passage<R: Rng>(
        &self,
        start: usize,
        tracked: &[bool],
        max_steps: u64,
        rng: &mut R,
    ) -> Vec<Option<u64>> {
        let mut hit = vec![None; self.n()];
        let mut remaining = tracked.iter().filter(|&&t| t).count();
        let mut s = start;
        let mut t = 0;
        while remaining > 0 && t < max_steps {
            t += 1;
            s = self.step(s, rng);
            if tracked[s] && hit[s].is_none() {
                hit[s] = Some(t);
                remaining -= 1;
            }
        }
        hit
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub ell: u64,
    /// `vᵢ`, summing to `ell`.
    pub visits: Vec<u64>,
    pub start: usize,
    pub seed: u64,
}

impl TrajectoryStats {
    /// `Σᵢ vᵢ rᵢ`.
    pub fn accumulated_reward<T: Scalar>(&self, reward: &[T]) -> f64 {
        self.visits
            .iter()
            .zip(reward)
            .map(|(&v, r)| v as f64 * r.as_f64())
            .sum()
    }
}

/// Walks `ell` steps of `chain` from `start`.
pub fn simulate<T: Scalar>(
    chain: &ChainModel<T>,
    start: usize,
    ell: u64,
    seed: u64,
) -> Result<TrajectoryStats> {
    chain.check_state(start)?;
    if ell == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    let visits = Simulator::new(chain).visits(start, ell, &mut rng_for(seed));
    Ok(TrajectoryStats {
        ell,
        visits,
        start,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Outcome {
    /// `ℓρ − Σᵢ vᵢ rᵢ`.
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
    pub delta: f64,
    pub span: f64,
    pub ell: u64,
    pub start: usize,
    pub seed: u64,
}

/// Violation statistics of one confidence level over a batch of replicas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaSummary {
    pub delta: f64,
    pub replicas: u64,
    pub violations: u64,
    pub frequency: f64,
    pub mean_lhs: f64,
    pub rhs: f64,
    /// `δ + 3√(δ(1−δ)/replicas)`.
    pub tolerance: f64,
    pub passed: bool,
}

/// Unperturbed quantities entering the finite-horizon bound, plus a sampler
/// for the perturbed chain.
#[derive(Debug, Clone)]
pub struct Lemma1Setup {
    pub rho: f64,
    pub span: f64,
    pub delta_norm: f64,
    reward: Vec<f64>,
    sim: Simulator,
}

impl Lemma1Setup {
    pub fn new<T: Scalar>(mrp: &MrpModel<T>, p_tilde: &ChainModel<T>) -> Result<Self> {
        if p_tilde.n() != mrp.n() {
            return Err(Error::DimensionMismatch {
                expected: mrp.n(),
                found: p_tilde.n(),
            });
        }
        let mu = stationary(mrp.chain())?;
        let rho = linalg::dot(mu.as_slice(), mrp.reward());
        let span = poisson_solve(mrp, &mu, rho)?.span();
        Ok(Self {
            rho: rho.as_f64(),
            span: span.as_f64(),
            delta_norm: inf_norm_delta(mrp.chain(), p_tilde)?.as_f64(),
            reward: mrp.reward().iter().map(|r| r.as_f64()).collect(),
            sim: Simulator::new(p_tilde),
        })
    }

    pub fn n(&self) -> usize {
        self.sim.n()
    }

    /// `(ℓ/2) span ‖ΔP‖∞ + span (1 + √(2ℓ ln(1/δ)))`.
    pub fn rhs(&self, ell: u64, delta: f64) -> f64 {
        let l = ell as f64;
        l / 2.0 * self.span * self.delta_norm
            + self.span * (1.0 + (2.0 * l * (1.0 / delta).ln()).sqrt())
    }

    fn lhs(&self, start: usize, ell: u64, seed: u64) -> f64 {
        let v = self.sim.visits(start, ell, &mut rng_for(seed));
        let acc: f64 = v
            .iter()
            .zip(&self.reward)
            .map(|(&c, &r)| c as f64 * r)
            .sum();
        ell as f64 * self.rho - acc
    }

    fn validate(&self, start: usize, ell: u64, delta: f64) -> Result<()> {
        if start >= self.n() {
            return Err(Error::StateOutOfRange {
                state: start,
                n: self.n(),
            });
        }
        if ell == 0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "delta {delta} not in (0, 1)"
            )));
        }
        Ok(())
    }

    pub fn check(&self, start: usize, ell: u64, delta: f64, seed: u64) -> Result<Lemma1Outcome> {
        self.validate(start, ell, delta)?;
        let lhs = self.lhs(start, ell, seed);
        let rhs = self.rhs(ell, delta);
        Ok(Lemma1Outcome {
            lhs,
            rhs,
            violated: lhs > rhs,
            delta,
            span: self.span,
            ell,
            start,
            seed,
        })
    }

    /// Runs `replicas` independent walks (seeds `base_seed + k`) and counts
    /// violations for each confidence level.
    pub fn run(
        &self,
        start: usize,
        ell: u64,
        deltas: &[f64],
        replicas: u64,
        base_seed: u64,
    ) -> Result<Vec<ReplicaSummary>> {
        for &d in deltas {
            self.validate(start, ell, d)?;
        }
        let lhs: Vec<f64> = (0..replicas)
            .into_par_iter()
            .map(|k| self.lhs(start, ell, replica_seed(base_seed, k)))
            .collect();
        let mean_lhs = if replicas == 0 {
            0.0
        } else {
            lhs.iter().sum::<f64>() / replicas as f64
        };
        Ok(deltas
            .iter()
            .map(|&delta| {
                let rhs = self.rhs(ell, delta);
                let violations = lhs.iter().filter(|&&x| x > rhs).count() as u64;
                let frequency = if replicas == 0 {
                    0.0
                } else {
                    violations as f64 / replicas as f64
                };
                let tolerance =
                    delta + 3.0 * (delta * (1.0 - delta) / replicas.max(1) as f64).sqrt();
                ReplicaSummary {
                    delta,
                    replicas,
                    violations,
                    frequency,
                    mean_lhs,
                    rhs,
                    tolerance,
                    passed: frequency <= tolerance,
                }
            })
            .collect())
    }
}

/// One trajectory of the finite-horizon bound.
pub fn lemma1_check<T: Scalar>(
    mrp: &MrpModel<T>,
    p_tilde: &ChainModel<T>,
    start: usize,
    ell: u64,
    delta: f64,
    seed: u64,
) -> Result<Lemma1Outcome> {
    Lemma1Setup::new(mrp, p_tilde)?.check(start, ell, delta, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoConvergence {
    pub ell: u64,
    pub rho: f64,
    /// `(1/ℓ) Σᵢ vᵢ rᵢ` on the perturbed chain.
    pub empirical: f64,
    /// `|ρ − empirical|`.
    pub deviation: f64,
    /// `½ span(λ) ‖ΔP‖∞`.
    pub limit_bound: f64,
    /// `span(λ)(1 + √(2ℓ ln ℓ))/ℓ`, the finite-horizon term at `δ = 1/ℓ`.
    pub slack: f64,
    pub within_envelope: bool,
    /// `Σᵢ μ̃ᵢ⁽ˢᵗᵃʳᵗ⁾ rᵢ` from the exact limiting distribution.
    pub rho_tilde: f64,
    /// `|empirical − rho_tilde|`.
    pub limit_gap: f64,
}

/// Empirical average reward of a long walk on `P̃` against the average
/// reward bound, at horizon [`CONVERGENCE_HORIZON`].
pub fn rho_convergence_check<T: Scalar>(
    mrp: &MrpModel<T>,
    p_tilde: &ChainModel<T>,
    start: usize,
    seed: u64,
) -> Result<RhoConvergence> {
    rho_convergence_check_at(mrp, p_tilde, start, seed, CONVERGENCE_HORIZON)
}

pub fn rho_convergence_check_at<T: Scalar>(
    mrp: &MrpModel<T>,
    p_tilde: &ChainModel<T>,
    start: usize,
    seed: u64,
    ell: u64,
) -> Result<RhoConvergence> {
    let setup = Lemma1Setup::new(mrp, p_tilde)?;
    if ell < 2 {
        return Err(Error::InvalidArgument("horizon must be at least 2".into()));
    }
    setup.validate(start, ell, 0.5)?;
    let l = ell as f64;
    let empirical = (l * setup.rho - setup.lhs(start, ell, seed)) / l;
    let deviation = (setup.rho - empirical).abs();
    let limit_bound = 0.5 * setup.span * setup.delta_norm;
    let slack = setup.span * (1.0 + (2.0 * l * l.ln()).sqrt()) / l;
    let lim = limiting_distribution(p_tilde)?;
    let rho_tilde = linalg::dot(lim.row(start), mrp.reward()).as_f64();
    Ok(RhoConvergence {
        ell,
        rho: setup.rho,
        empirical,
        deviation,
        limit_bound,
        slack,
        within_envelope: deviation <= limit_bound + slack,
        rho_tilde,
        limit_gap: (empirical - rho_tilde).abs(),
    })
}
