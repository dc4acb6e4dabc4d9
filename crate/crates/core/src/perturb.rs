//! Perturbation bounds for the stationary distribution and the average
//! reward, and reports comparing them with actual deviations.
//!
//! For a unichain `P` and an arbitrary `P̃` (reducible allowed, in which case
//! the perturbed long-run distribution `μ̃⁽ˢ⁾` depends on the start `s`):
//!
//! * average reward: `|ρ − ρ̃| ≤ ½ span(λ) ‖P − P̃‖∞`
//! * per state (recurrent `i`): `|μᵢ − μ̃ᵢ| ≤ ½ μᵢ max_{j≠i} τⱼᵢ ‖P − P̃‖∞`
//! * in 1-norm: `‖μ − μ̃‖₁ ≤ max_A {maxᵢ Σ_{j∈A∖i} μⱼτᵢⱼ − minᵢ Σ_{j∈A∖i} μⱼτᵢⱼ} ‖P − P̃‖∞`,
//!   which is at most `maxᵢ ηᵢ ‖P − P̃‖∞`.
//!
//! The 1-norm bounds carry no factor ½: the average-reward bound applied to
//! the reward `1{μⱼ ≥ μ̃ⱼ}` controls the total variation distance, which is
//! half the 1-norm.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bias::{self, poisson_solve};
use crate::linalg::{self, Matrix};
use crate::passage::{first_passage_matrix, kemeny, PassageMatrix};
use crate::solve::{limiting_distribution, stationary};
use crate::{
    float_serde, tol, ChainModel, Error, MrpModel, Result, Scalar, StationaryDistribution,
};

/// Recurrent-state count up to which the subset maximum is enumerated exactly.
pub const EXACT_SUBSET_LIMIT: usize = 20;
/// Random subsets drawn in sampled mode (besides singletons and the full set).
pub const SAMPLED_SUBSETS: usize = 1 << 14;

/// `maxᵢ Σⱼ |aᵢⱼ|`.
pub fn matrix_inf_norm<T: Scalar>(a: &Matrix<T>) -> T {
    a.iter_rows().map(linalg::norm_1).fold(T::zero(), T::max)
}

/// `‖P − P̃‖∞`.
pub fn inf_norm_delta<T: Scalar>(p: &ChainModel<T>, p_tilde: &ChainModel<T>) -> Result<T> {
    Ok(matrix_inf_norm(&p.transition().sub(p_tilde.transition())?))
}

/// `½ μᵢ max_{j≠i} τⱼᵢ ‖P − P̃‖∞` for a recurrent state `i`.
///
/// Transient `i` is rejected: a perturbation can make it recurrent, so
/// `μᵢ = 0` gives no bound there.
pub fn cho_meyer_bound<T: Scalar>(
    mu: &StationaryDistribution<T>,
    tau: &PassageMatrix<T>,
    delta_norm: T,
    i: usize,
) -> Result<T> {
    if i >= mu.len() {
        return Err(Error::StateOutOfRange {
            state: i,
            n: mu.len(),
        });
    }
    if !(mu.get(i) > T::zero()) {
        return Err(Error::TransientTarget { state: i });
    }
    let far = (0..tau.n())
        .filter(|&j| j != i)
        .map(|j| tau.get(j, i))
        .fold(T::zero(), T::max);
    Ok(mu.get(i) / T::lit(2.0) * far * delta_norm)
}

/// `η ‖P − P̃‖∞`.
pub fn hunter_bound<T: Scalar>(eta: T, delta_norm: T) -> T {
    eta * delta_norm
}

/// `½ span(λ) ‖P − P̃‖∞`.
pub fn bias_span_bound<T: Scalar>(span: T, delta_norm: T) -> T {
    span / T::lit(2.0) * delta_norm
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum SubsetMode {
    /// All subsets of the recurrent states.
    Exact,
    /// [`SAMPLED_SUBSETS`] uniform random subsets plus all singletons and the full set.
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CorollaryBound<T> {
    /// `max_A {…} · ‖P − P̃‖∞`.
    #[serde(with = "float_serde")]
    pub bound: T,
    /// `max_A {maxᵢ Σ_{j∈A∖i} μⱼτᵢⱼ − minᵢ Σ_{j∈A∖i} μⱼτᵢⱼ}`.
    #[serde(with = "float_serde")]
    pub subset_span: T,
    /// Maximizing subset (0-based states, ascending).
    pub attaining_subset: Vec<usize>,
    pub exact: bool,
    pub subsets_evaluated: u64,
}

/// Evaluates the subset expression over recurrent states.
struct SubsetObjective<'a, T> {
    mu: &'a StationaryDistribution<T>,
    tau: &'a PassageMatrix<T>,
    recurrent: Vec<usize>,
}

impl<T: Scalar> SubsetObjective<'_, T> {
    /// `maxᵢ sᵢ − minᵢ sᵢ`, `sᵢ = Σ_{j∈A, j≠i} μⱼτᵢⱼ` accumulated in ascending `j`.
    fn value(&self, members: impl Iterator<Item = usize> + Clone, acc: &mut [T]) -> T {
        acc.fill(T::zero());
        for a in members {
            let j = self.recurrent[a];
            let m = self.mu.get(j);
            for (i, s) in acc.iter_mut().enumerate() {
                if i != j {
                    *s = *s + m * self.tau.get(i, j);
                }
            }
        }
        let (lo, hi) = acc
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        hi - lo
    }

    fn mask_value(&self, mask: u64, acc: &mut [T]) -> T {
        let bits = (0..self.recurrent.len()).filter(move |&a| mask >> a & 1 == 1);
        self.value(bits, acc)
    }
}

/// `(value, key)` maximum; ties keep the smaller key.
fn better<T: Scalar, K: Ord>(a: (T, K), b: (T, K)) -> (T, K) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// The subset-maximum bound on `‖μ − μ̃‖₁`.
///
/// Subsets range over recurrent states only (transient `j` have `μⱼ = 0`);
/// the inner max/min range over all states.
pub fn corollary_subset_bound<T: Scalar>(
    mu: &StationaryDistribution<T>,
    tau: &PassageMatrix<T>,
    delta_norm: T,
    mode: SubsetMode,
) -> Result<CorollaryBound<T>> {
    let n = tau.n();
    let recurrent: Vec<usize> = (0..n).filter(|&j| mu.get(j) > T::zero()).collect();
    let m = recurrent.len();
    let obj = SubsetObjective { mu, tau, recurrent };

    let (subset_span, members, evaluated, exact) = match mode {
        SubsetMode::Exact => {
            if m > EXACT_SUBSET_LIMIT {
                return Err(Error::TooLarge {
                    states: m,
                    limit: EXACT_SUBSET_LIMIT,
                });
            }
            let total = 1u64 << m;
            let block = (total / 256).max(1);
            let (v, mask) = (0..total.div_ceil(block))
                .into_par_iter()
                .map(|b| {
                    let mut acc = vec![T::zero(); n];
                    (b * block..((b + 1) * block).min(total))
                        .map(|mask| (obj.mask_value(mask, &mut acc), mask))
                        .fold((T::neg_infinity(), u64::MAX), better)
                })
                .reduce(|| (T::neg_infinity(), u64::MAX), better);
            let members: Vec<usize> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
            (v, members, total, true)
        }
        SubsetMode::Sampled { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut candidates: Vec<Vec<usize>> = (0..m).map(|a| vec![a]).collect();
            candidates.push((0..m).collect());
            for _ in 0..SAMPLED_SUBSETS {
                candidates.push((0..m).filter(|_| rng.random::<bool>()).collect());
            }
            let evaluated = candidates.len() as u64;
            let (v, members) = candidates
                .into_par_iter()
                .map_init(
                    || vec![T::zero(); n],
                    |acc, c| (obj.value(c.iter().copied(), acc), c),
                )
                .reduce(|| (T::neg_infinity(), vec![usize::MAX]), better);
            (v.max(T::zero()), members, evaluated, false)
        }
    };
    let mut attaining_subset: Vec<usize> = members.iter().map(|&a| obj.recurrent[a]).collect();
    attaining_subset.retain(|&j| j < n);
    Ok(CorollaryBound {
        bound: subset_span * delta_norm,
        subset_span,
        attaining_subset,
        exact,
        subsets_evaluated: evaluated,
    })
}

/// `|ρ − ρ̃⁽ˢᵗᵃʳᵗ⁾|` with `ρ̃` taken from the start-dependent limit of `P̃`.
pub fn average_reward_deviation<T: Scalar>(
    mrp: &MrpModel<T>,
    p_tilde: &ChainModel<T>,
    start: usize,
) -> Result<T> {
    if p_tilde.n() != mrp.n() {
        return Err(Error::DimensionMismatch {
            expected: mrp.n(),
            found: p_tilde.n(),
        });
    }
    p_tilde.check_state(start)?;
    let rho = mrp.rho()?;
    let lim = limiting_distribution(p_tilde)?;
    Ok((rho - linalg::dot(lim.row(start), mrp.reward())).abs())
}

/// `rⱼ = 1` if `μⱼ ≥ μ̃ⱼ`, else 0: its average-reward gap is the total
/// variation distance between `μ` and `μ̃`.
pub fn total_variation_reward<T: Scalar>(mu: &[T], mu_tilde: &[T]) -> Vec<T> {
    mu.iter()
        .zip(mu_tilde)
        .map(|(&a, &b)| if a >= b { T::one() } else { T::zero() })
        .collect()
}

/// Reward 1 at `i`, 0 elsewhere.
pub fn indicator_reward<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    (0..n)
        .map(|j| if j == i { T::one() } else { T::zero() })
        .collect()
}

/// Which start states of `P̃` a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Starts {
    All,
    One(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Passage-time bound of a recurrent state.
    ChoMeyer,
    /// Average-reward bound for the indicator reward of a transient state,
    /// with the span of its Poisson-solved bias.
    IndicatorBiasSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Actuals<T> {
    /// `|μᵢ − μ̃ᵢ⁽ˢ⁾|`, one row per reported start.
    #[serde(with = "float_serde::nested")]
    pub per_state: Vec<Vec<T>>,
    /// `‖μ − μ̃⁽ˢ⁾‖₁`.
    #[serde(with = "float_serde::vec")]
    pub l1: Vec<T>,
    /// `|ρ − ρ̃⁽ˢ⁾|` for the process's own reward.
    #[serde(with = "float_serde::vec")]
    pub rho_deviation: Vec<T>,
    /// `|ρ − ρ̃⁽ˢ⁾|` for the total-variation reward of that start.
    #[serde(with = "float_serde::vec")]
    pub total_variation: Vec<T>,
}

/// Actual over bound; 0 when both vanish and `+∞` when only the bound does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Tightness<T> {
    #[serde(with = "float_serde::nested")]
    pub per_state: Vec<Vec<T>>,
    #[serde(with = "float_serde::vec")]
    pub l1_corollary: Vec<T>,
    #[serde(with = "float_serde::vec")]
    pub l1_hunter: Vec<T>,
    #[serde(with = "float_serde::vec")]
    pub rho: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PerturbationReport<T> {
    #[serde(with = "float_serde")]
    pub inf_norm_delta: T,
    /// Reported start states of `P̃` (0-based).
    pub starts: Vec<usize>,
    /// Recurrent classes of `P̃`.
    pub perturbed_classes: Vec<Vec<usize>>,
    #[serde(with = "float_serde::vec")]
    pub mu: Vec<T>,
    /// `μ̃⁽ˢ⁾` per reported start.
    #[serde(with = "float_serde::nested")]
    pub mu_tilde: Vec<Vec<T>>,
    #[serde(with = "float_serde::vec")]
    pub per_state_bounds: Vec<T>,
    pub per_state_bound_kind: Vec<BoundKind>,
    /// Kemeny's constant of `P` (mean over recurrent starts).
    #[serde(with = "float_serde")]
    pub eta: T,
    /// `maxᵢ ηᵢ` over all states, the condition number of `hunter_bound`.
    #[serde(with = "float_serde")]
    pub eta_max: T,
    #[serde(with = "float_serde")]
    pub hunter_bound: T,
    #[serde(with = "float_serde")]
    pub corollary_l1_bound: T,
    pub corollary_exact: bool,
    pub attaining_subset: Vec<usize>,
    /// Average-reward bounds keyed by reward function: `reward`,
    /// `indicator:<state>` and `total_variation:<start>` (1-based labels).
    #[serde(with = "float_serde::map")]
    pub bias_span_bounds: BTreeMap<String, T>,
    pub actuals: Actuals<T>,
    pub tightness: Tightness<T>,
    /// Start with the largest 1-norm deviation.
    pub worst_start: usize,
    /// Violated validity invariants (empty when every bound holds).
    pub violations: Vec<String>,
}

fn ratio<T: Scalar>(actual: T, bound: T) -> T {
    if bound > T::zero() {
        actual / bound
    } else if actual == T::zero() {
        T::zero()
    } else {
        T::infinity()
    }
}

/// Bias span of `mrp`'s chain under another reward, by the Poisson solve.
fn poisson_span<T: Scalar>(
    mrp: &MrpModel<T>,
    mu: &StationaryDistribution<T>,
    reward: Vec<T>,
) -> Result<T> {
    let m = mrp.with_reward(reward)?;
    let rho = linalg::dot(mu.as_slice(), m.reward());
    Ok(poisson_solve(&m, mu, rho)?.span())
}

/// Compares every bound with the actual deviations of `P̃` from `mrp`'s chain.
pub fn build_report<T: Scalar>(
    mrp: &MrpModel<T>,
    p_tilde: &ChainModel<T>,
    mode: SubsetMode,
    starts: Starts,
) -> Result<PerturbationReport<T>> {
    build_report_with(mrp, p_tilde, mode, starts, T::lit(tol::BOUND))
}

/// [`build_report`] with an explicit slack for the validity checks.
pub fn build_report_with<T: Scalar>(
    mrp: &MrpModel<T>,
    p_tilde: &ChainModel<T>,
    mode: SubsetMode,
    starts: Starts,
    slack: T,
) -> Result<PerturbationReport<T>> {
    let chain = mrp.chain();
    let n = chain.n();
    if p_tilde.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p_tilde.n(),
        });
    }
    let starts: Vec<usize> = match starts {
        Starts::All => (0..n).collect(),
        Starts::One(s) => {
            p_tilde.check_state(s)?;
            vec![s]
        }
    };

    let mu = stationary(chain)?;
    let tau = first_passage_matrix(chain, &mu)?;
    let k = kemeny(&tau, &mu)?;
    let delta = inf_norm_delta(chain, p_tilde)?;
    let lim = limiting_distribution(p_tilde)?;
    let rho = linalg::dot(mu.as_slice(), mrp.reward());

    let mut bias_span_bounds = BTreeMap::new();
    let own_span = poisson_solve(mrp, &mu, rho)?.span();
    let reward_bound = bias_span_bound(own_span, delta);
    bias_span_bounds.insert("reward".to_string(), reward_bound);

    let mut per_state_bounds = Vec::with_capacity(n);
    let mut per_state_bound_kind = Vec::with_capacity(n);
    for i in 0..n {
        let ind_bound = bias_span_bound(poisson_span(mrp, &mu, indicator_reward(n, i))?, delta);
        bias_span_bounds.insert(format!("indicator:{}", i + 1), ind_bound);
        match cho_meyer_bound(&mu, &tau, delta, i) {
            Ok(b) => {
                per_state_bounds.push(b);
                per_state_bound_kind.push(BoundKind::ChoMeyer);
            }
            Err(Error::TransientTarget { .. }) => {
                per_state_bounds.push(ind_bound);
                per_state_bound_kind.push(BoundKind::IndicatorBiasSpan);
            }
            Err(e) => return Err(e),
        }
    }

    let corollary = corollary_subset_bound(&mu, &tau, delta, mode)?;
    let eta_max = k.eta_max();
    let hunter = hunter_bound(eta_max, delta);

    let mut actuals = Actuals {
        per_state: vec![],
        l1: vec![],
        rho_deviation: vec![],
        total_variation: vec![],
    };
    let mut tight = Tightness {
        per_state: vec![],
        l1_corollary: vec![],
        l1_hunter: vec![],
        rho: vec![],
    };
    let mut mu_tilde = Vec::with_capacity(starts.len());
    let mut violations = Vec::new();

    for &s in &starts {
        let mt = lim.row(s).to_vec();
        let dev: Vec<T> = mu
            .as_slice()
            .iter()
            .zip(&mt)
            .map(|(&a, &b)| (a - b).abs())
            .collect();
        let l1 = linalg::norm_1(&dev);
        let rho_dev = (rho - linalg::dot(&mt, mrp.reward())).abs();

        let tv_reward = total_variation_reward(mu.as_slice(), &mt);
        let tv_dev = (linalg::dot(mu.as_slice(), &tv_reward) - linalg::dot(&mt, &tv_reward)).abs();
        let tv_bound = bias_span_bound(poisson_span(mrp, &mu, tv_reward)?, delta);
        bias_span_bounds.insert(format!("total_variation:{}", s + 1), tv_bound);

        for (i, (&d, &b)) in dev.iter().zip(&per_state_bounds).enumerate() {
            if d > b + slack {
                violations.push(format!(
                    "start {}: |mu_{} - mu~_{}| = {d} exceeds {b}",
                    s + 1,
                    i + 1,
                    i + 1
                ));
            }
        }
        if l1 > corollary.bound + slack {
            violations.push(format!(
                "start {}: l1 deviation {l1} exceeds subset bound {}",
                s + 1,
                corollary.bound
            ));
        }
        if rho_dev > reward_bound + slack {
            violations.push(format!(
                "start {}: |rho - rho~| = {rho_dev} exceeds {reward_bound}",
                s + 1
            ));
        }
        if tv_dev > tv_bound + slack {
            violations.push(format!(
                "start {}: total variation {tv_dev} exceeds {tv_bound}",
                s + 1
            ));
        }

        tight.per_state.push(
            dev.iter()
                .zip(&per_state_bounds)
                .map(|(&d, &b)| ratio(d, b))
                .collect(),
        );
        tight.l1_corollary.push(ratio(l1, corollary.bound));
        tight.l1_hunter.push(ratio(l1, hunter));
        tight.rho.push(ratio(rho_dev, reward_bound));
        actuals.per_state.push(dev);
        actuals.l1.push(l1);
        actuals.rho_deviation.push(rho_dev);
        actuals.total_variation.push(tv_dev);
        mu_tilde.push(mt);
    }
    if corollary.bound > hunter + T::lit(tol::BOUND_ORDER) {
        violations.push(format!(
            "subset bound {} exceeds Kemeny bound {hunter}",
            corollary.bound
        ));
    }
    let worst = (0..starts.len()).fold(0, |w, a| if actuals.l1[a] > actuals.l1[w] { a } else { w });

    Ok(PerturbationReport {
        inf_norm_delta: delta,
        worst_start: starts[worst],
        starts,
        perturbed_classes: p_tilde.structure().recurrent_classes.clone(),
        mu: mu.into_vec(),
        mu_tilde,
        per_state_bounds,
        per_state_bound_kind,
        eta: k.eta,
        eta_max,
        hunter_bound: hunter,
        corollary_l1_bound: corollary.bound,
        corollary_exact: corollary.exact,
        attaining_subset: corollary.attaining_subset,
        bias_span_bounds,
        actuals,
        tightness: tight,
        violations,
    })
}

/// Span of the passage-formula bias for the indicator reward of `i`,
/// `μᵢ max_{j≠i} τⱼᵢ` for recurrent `i`.
pub fn indicator_passage_span<T: Scalar>(
    mrp: &MrpModel<T>,
    mu: &StationaryDistribution<T>,
    tau: &PassageMatrix<T>,
    i: usize,
) -> Result<T> {
    let m = mrp.with_reward(indicator_reward(mrp.n(), i))?;
    Ok(bias::bias_from_passage(&m, mu, tau)?.span())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Chain, Mrp};

    fn sym() -> Chain {
        Chain::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap()
    }

    fn parts(c: &Chain) -> (StationaryDistribution<f64>, PassageMatrix<f64>) {
        let mu = stationary(c).unwrap();
        let tau = first_passage_matrix(c, &mu).unwrap();
        (mu, tau)
    }

    #[test]
    fn inf_norm_examples() {
        let p = Chain::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let q = Chain::new(vec![vec![0.9, 0.1], vec![0.0, 1.0]]).unwrap();
        assert_eq!(inf_norm_delta(&p, &p).unwrap(), 0.0);
        assert!((inf_norm_delta(&p, &q).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn cho_meyer_examples() {
        let (mu, tau) = parts(&sym());
        assert_eq!(cho_meyer_bound(&mu, &tau, 0.0, 0).unwrap(), 0.0);
        assert!((cho_meyer_bound(&mu, &tau, 0.2, 0).unwrap() - 0.1).abs() < 1e-15);
        let c = Chain::new(vec![
            vec![0.3, 0.7, 0.0],
            vec![0.6, 0.4, 0.0],
            vec![0.2, 0.3, 0.5],
        ])
        .unwrap();
        let (mu, tau) = parts(&c);
        assert_eq!(
            cho_meyer_bound(&mu, &tau, 0.2, 2),
            Err(Error::TransientTarget { state: 2 })
        );
    }

    #[test]
    fn hunter_and_span_bounds() {
        assert_eq!(hunter_bound(1.0f64, 0.0), 0.0);
        assert!((hunter_bound(1.0f64, 0.2) - 0.2).abs() < 1e-15);
        assert!((hunter_bound(1.0f64, 0.5) - 0.5).abs() < 1e-15);
        assert_eq!(bias_span_bound(0.0f64, 0.7), 0.0);
        assert!((bias_span_bound(1.0f64, 0.2) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn halved_l1_constant_is_not_a_valid_bound() {
        let p = Chain::new(vec![vec![0.9, 0.1], vec![0.9, 0.1]]).unwrap();
        let q = Chain::new(vec![vec![0.8, 0.2], vec![0.9, 0.1]]).unwrap();
        let (mu, tau) = parts(&p);
        let eta = kemeny(&tau, &mu).unwrap().eta;
        let delta = inf_norm_delta(&p, &q).unwrap();
        let mt = limiting_distribution(&q).unwrap().row(0).to_vec();
        let l1 = linalg::norm_1(&[mu.get(0) - mt[0], mu.get(1) - mt[1]]);
        assert!(l1 > eta / 2.0 * delta);
        assert!(l1 <= hunter_bound(eta, delta));
    }

    #[test]
    fn two_state_corollary_enumeration() {
        let (mu, tau) = parts(&sym());
        let b = corollary_subset_bound(&mu, &tau, 1.0, SubsetMode::Exact).unwrap();
        assert!((b.subset_span - 1.0).abs() < 1e-15);
        assert!((b.bound - 1.0).abs() < 1e-15);
        assert_eq!(b.attaining_subset, vec![0]);
        assert_eq!(b.subsets_evaluated, 4);
        let s = corollary_subset_bound(&mu, &tau, 1.0, SubsetMode::Sampled { seed: 1 }).unwrap();
        assert!(s.bound <= b.bound);
        assert!(!s.exact);
    }

    #[test]
    fn too_large_for_exact_mode() {
        let c: Chain = crate::model::generate_random_unichain(21, 0.3, 0, 5).unwrap();
        let (mu, tau) = parts(&c);
        assert!(matches!(
            corollary_subset_bound(&mu, &tau, 0.1, SubsetMode::Exact),
            Err(Error::TooLarge { states: 21, .. })
        ));
        assert!(corollary_subset_bound(&mu, &tau, 0.1, SubsetMode::Sampled { seed: 0 }).is_ok());
    }

    #[test]
    fn average_reward_deviation_examples() {
        let mrp = Mrp::new(sym(), vec![1.0, 0.0]).unwrap();
        assert_eq!(average_reward_deviation(&mrp, &sym(), 0).unwrap(), 0.0);
        let q = Chain::new(vec![vec![0.7, 0.3], vec![0.5, 0.5]]).unwrap();
        assert!((average_reward_deviation(&mrp, &q, 1).unwrap() - 0.125).abs() < 1e-15);
        let flat = Mrp::new(sym(), vec![2.0, 2.0]).unwrap();
        assert!(average_reward_deviation(&flat, &q, 0).unwrap() < 1e-15);
    }

    #[test]
    fn identical_chains_report() {
        let mrp = Mrp::new(sym(), vec![1.0, 0.0]).unwrap();
        let r = build_report(&mrp, &sym(), SubsetMode::Exact, Starts::All).unwrap();
        assert_eq!(r.inf_norm_delta, 0.0);
        assert!(r.actuals.l1.iter().all(|&x| x == 0.0));
        assert!(r.violations.is_empty());
        assert_eq!(r.hunter_bound, 0.0);
    }

    #[test]
    fn reducible_perturbation_report() {
        let p = Chain::new(vec![
            vec![0.4, 0.3, 0.3],
            vec![0.3, 0.4, 0.3],
            vec![0.3, 0.3, 0.4],
        ])
        .unwrap();
        let q = Chain::new(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.3, 0.3, 0.4],
        ])
        .unwrap();
        let mrp = Mrp::new(p, vec![1.0, 0.0, 0.5]).unwrap();
        let r = build_report(&mrp, &q, SubsetMode::Exact, Starts::All).unwrap();
        assert_eq!(r.perturbed_classes.len(), 2);
        assert_ne!(r.actuals.l1[0], r.actuals.l1[2]);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.corollary_l1_bound <= r.hunter_bound + 1e-12);
    }

    #[test]
    fn indicator_reduction_matches_cho_meyer() {
        let c: Chain = crate::model::generate_random_unichain(6, 0.5, 1, 8).unwrap();
        let (mu, tau) = parts(&c);
        let mrp = Mrp::new(c, vec![0.0; 6]).unwrap();
        for i in (0..6).filter(|&i| mu.get(i) > 0.0) {
            let span = indicator_passage_span(&mrp, &mu, &tau, i).unwrap();
            let a = bias_span_bound(span, 0.3);
            let b = cho_meyer_bound(&mu, &tau, 0.3, i).unwrap();
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn report_round_trips_through_json() {
        let mrp = Mrp::new(sym(), vec![1.0, 0.0]).unwrap();
        let q = Chain::new(vec![vec![0.7, 0.3], vec![0.5, 0.5]]).unwrap();
        let r = build_report(&mrp, &q, SubsetMode::Exact, Starts::One(0)).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        for key in [
            "inf_norm_delta",
            "hunter_bound",
            "corollary_l1_bound",
            "per_state_bounds",
            "actuals",
            "tightness",
            "attaining_subset",
        ] {
            assert!(s.contains(&format!("\"{key}\"")), "{key}");
        }
        let back: PerturbationReport<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
