//! Stationary distribution, average reward and start-dependent limiting
//! (Cesàro) distributions of possibly reducible chains.

use crate::linalg::{self, Lu, Matrix};
use crate::{tol, ChainModel, Error, MrpModel, Result, Scalar};

/// Unique stationary distribution of a unichain; zero on transient states.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution<T> {
    mu: Vec<T>,
}

impl<T: Scalar> StationaryDistribution<T> {
    /// Wraps a probability vector, checking that it sums to 1 and is non-negative.
    pub fn new(mu: Vec<T>) -> Result<Self> {
        let s: T = mu.iter().copied().sum();
        if (s - T::one()).abs() > T::noise_floor(tol::MU_SUM) {
            return Err(Error::InvalidArgument(format!("distribution sums to {s}")));
        }
        if let Some(i) = mu.iter().position(|&m| m < T::zero() || !m.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "entry {i} is not a probability"
            )));
        }
        Ok(Self { mu })
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.mu
    }

    #[inline]
    pub fn get(&self, i: usize) -> T {
        self.mu[i]
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.mu
    }
}

/// Row `s` is the long-run average state distribution when starting in `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitingDistribution<T> {
    pub per_start: Matrix<T>,
}

impl<T: Scalar> LimitingDistribution<T> {
    pub fn row(&self, start: usize) -> &[T] {
        self.per_start.row(start)
    }

    /// Average reward `Σᵢ μ̃ᵢ⁽ˢ⁾ rᵢ` for every start state `s`.
    pub fn average_rewards(&self, reward: &[T]) -> Vec<T> {
        self.per_start.mul_vec(reward)
    }
}

/// Solves `(Pᵀ − I) μ = 0` with the first equation replaced by `Σμ = 1`.
fn solve_stationary<T: Scalar>(p: &Matrix<T>, context: &'static str) -> Result<Vec<T>> {
    let n = p.rows();
    let mut a = Matrix::from_fn(n, n, |i, j| {
        p[(j, i)] - if i == j { T::one() } else { T::zero() }
    });
    a.row_mut(0).fill(T::one());
    let mut b = vec![T::zero(); n];
    b[0] = T::one();
    linalg::solve(&a, &b, context)
}

fn clamp_and_normalize<T: Scalar>(mu: &mut [T], context: &'static str) -> Result<()> {
    let floor = -T::noise_floor(tol::MU_CLAMP);
    for m in mu.iter_mut() {
        if *m < floor || !m.is_finite() {
            return Err(Error::SingularSystem { context });
        }
        if *m < T::zero() {
            *m = T::zero();
        }
    }
    let s: T = mu.iter().copied().sum();
    if s != T::one() {
        mu.iter_mut().for_each(|m| *m = *m / s);
    }
    Ok(())
}

/// Stationary distribution of a unichain by a dense LU solve.
pub fn stationary<T: Scalar>(chain: &ChainModel<T>) -> Result<StationaryDistribution<T>> {
    chain.require_unichain()?;
    let mut mu = solve_stationary(chain.transition(), "stationary distribution")?;
    for &t in &chain.structure().transient {
        mu[t] = T::zero();
    }
    clamp_and_normalize(&mut mu, "stationary distribution")?;
    Ok(StationaryDistribution { mu })
}

/// `ρ = Σᵢ μᵢ rᵢ`.
pub fn average_reward<T: Scalar>(mrp: &MrpModel<T>, mu: &StationaryDistribution<T>) -> Result<T> {
    if mu.len() != mrp.n() {
        return Err(Error::DimensionMismatch {
            expected: mrp.n(),
            found: mu.len(),
        });
    }
    Ok(linalg::dot(mu.as_slice(), mrp.reward()))
}

/// Probability of ending in each recurrent class, for each transient state.
///
/// Rows follow `structure().transient`, columns `structure().recurrent_classes`.
pub fn absorption_probabilities<T: Scalar>(chain: &ChainModel<T>) -> Result<Matrix<T>> {
    let s = chain.structure();
    let t = &s.transient;
    let k = s.recurrent_classes.len();
    if t.is_empty() {
        return Ok(Matrix::zeros(0, k));
    }
    let p = chain.transition();
    let q = p.principal(t);
    let lu = Lu::factor(
        &Matrix::identity(t.len()).sub(&q)?,
        "absorption probabilities",
    )?;
    let mut out = Matrix::zeros(t.len(), k);
    for (c, class) in s.recurrent_classes.iter().enumerate() {
        let b: Vec<T> = t
            .iter()
            .map(|&i| class.iter().map(|&j| p[(i, j)]).sum())
            .collect();
        for (a, x) in lu.solve(&b).into_iter().enumerate() {
            out[(a, c)] = x;
        }
    }
    Ok(out)
}

/// Expected number of steps until the chain first enters a recurrent state
/// (zero for recurrent starts).
pub fn steps_to_recurrence<T: Scalar>(chain: &ChainModel<T>) -> Result<Vec<T>> {
    let t = &chain.structure().transient;
    let mut h = vec![T::zero(); chain.n()];
    if t.is_empty() {
        return Ok(h);
    }
    let q = chain.transition().principal(t);
    let x = linalg::solve(
        &Matrix::identity(t.len()).sub(&q)?,
        &vec![T::one(); t.len()],
        "absorption time",
    )?;
    for (&i, v) in t.iter().zip(x) {
        h[i] = v;
    }
    Ok(h)
}

/// Start-dependent Cesàro limit: a mixture of the recurrent classes'
/// stationary distributions weighted by absorption probabilities.
pub fn limiting_distribution<T: Scalar>(chain: &ChainModel<T>) -> Result<LimitingDistribution<T>> {
    let n = chain.n();
    let s = chain.structure();
    let p = chain.transition();

    let class_mu = s
        .recurrent_classes
        .iter()
        .map(|class| {
            let mut mu = solve_stationary(&p.principal(class), "class stationary distribution")?;
            clamp_and_normalize(&mut mu, "class stationary distribution")?;
            Ok(mu)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut per_start = Matrix::zeros(n, n);
    for (class, mu) in s.recurrent_classes.iter().zip(&class_mu) {
        for &start in class {
            for (&j, &m) in class.iter().zip(mu) {
                per_start[(start, j)] = m;
            }
        }
    }
    let absorb = absorption_probabilities(chain)?;
    for (a, &start) in s.transient.iter().enumerate() {
        for (c, (class, mu)) in s.recurrent_classes.iter().zip(&class_mu).enumerate() {
            let w = absorb[(a, c)];
            for (&j, &m) in class.iter().zip(mu) {
                per_start[(start, j)] = per_start[(start, j)] + w * m;
            }
        }
    }
    Ok(LimitingDistribution { per_start })
}

/// `‖μP − μ‖∞`.
pub fn stationary_residual<T: Scalar>(chain: &ChainModel<T>, v: &[T]) -> T {
    let vp = chain.transition().vec_mul(v);
    vp.iter()
        .zip(v)
        .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Chain, Mrp};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn symmetric_two_state() {
        let c = Chain::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(close(
            stationary(&c).unwrap().as_slice(),
            &[0.5, 0.5],
            1e-15
        ));
    }

    #[test]
    fn three_cycle_uniform() {
        let c = Chain::new(vec![
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        let t = 1.0 / 3.0;
        assert!(close(stationary(&c).unwrap().as_slice(), &[t, t, t], 1e-15));
    }

    #[test]
    fn two_state_closed_form() {
        // μ = (q, p)/(p + q), p = 0.1, q = 0.5
        let c = Chain::new(vec![vec![0.9, 0.1], vec![0.5, 0.5]]).unwrap();
        assert!(close(
            stationary(&c).unwrap().as_slice(),
            &[5.0 / 6.0, 1.0 / 6.0],
            1e-14
        ));
    }

    #[test]
    fn reducible_chain_rejected() {
        let c = Chain::new(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap();
        assert!(matches!(stationary(&c), Err(Error::NotUnichain { .. })));
    }

    #[test]
    fn transient_states_have_zero_mass() {
        let c = Chain::new(vec![
            vec![0.3, 0.7, 0.0],
            vec![0.6, 0.4, 0.0],
            vec![0.2, 0.3, 0.5],
        ])
        .unwrap();
        let mu = stationary(&c).unwrap();
        assert_eq!(mu.get(2), 0.0);
        assert!(stationary_residual(&c, mu.as_slice()) < 1e-15);
    }

    #[test]
    fn average_reward_examples() {
        let c = Chain::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let mu = stationary(&c).unwrap();
        let m = Mrp::new(c.clone(), vec![3.25, 3.25]).unwrap();
        assert_eq!(average_reward(&m, &mu).unwrap(), 3.25);
        let m = Mrp::new(c, vec![1.0, 0.0]).unwrap();
        assert_eq!(average_reward(&m, &mu).unwrap(), 0.5);

        let c = Chain::new(vec![vec![0.9, 0.1], vec![0.5, 0.5]]).unwrap();
        let mu = stationary(&c).unwrap();
        let m = Mrp::new(c, vec![0.0, 6.0]).unwrap();
        assert!((average_reward(&m, &mu).unwrap() - 1.0).abs() < 1e-14);

        let short = StationaryDistribution::new(vec![1.0]).unwrap();
        assert!(matches!(
            average_reward(&m, &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn limiting_rows_of_unichain_equal_stationary() {
        let c = Chain::new(vec![
            vec![0.3, 0.7, 0.0],
            vec![0.6, 0.4, 0.0],
            vec![0.2, 0.3, 0.5],
        ])
        .unwrap();
        let mu = stationary(&c).unwrap();
        let lim = limiting_distribution(&c).unwrap();
        for s in 0..3 {
            assert!(close(lim.row(s), mu.as_slice(), 1e-14));
        }
    }

    #[test]
    fn symmetric_absorption() {
        let c = Chain::new(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap();
        let lim = limiting_distribution(&c).unwrap();
        assert!(close(lim.row(2), &[0.5, 0.5, 0.0], 1e-15));
        assert!(close(lim.row(0), &[1.0, 0.0, 0.0], 0.0));
    }

    #[test]
    fn absorption_with_self_loop() {
        // a = (1 − 0.5)⁻¹ (0.2, 0.3)
        let c = Chain::new(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.2, 0.3, 0.5],
        ])
        .unwrap();
        let lim = limiting_distribution(&c).unwrap();
        assert!(close(lim.row(2), &[0.4, 0.6, 0.0], 1e-15));
    }

    #[test]
    fn time_to_recurrence() {
        let c = Chain::new(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.5, 0.0, 0.5],
            vec![0.0, 0.5, 0.5],
        ])
        .unwrap();
        // h1 = 1 + 0.5 h2, h2 = 1 + 0.5 h1 + 0.5 h2  =>  h1 = 4, h2 = 6
        let h = steps_to_recurrence(&c).unwrap();
        assert!(close(&h, &[0.0, 4.0, 6.0], 1e-14));
    }

    #[test]
    fn f32_stationary() {
        let c = crate::Chain32::new(vec![vec![0.9, 0.1], vec![0.5, 0.5]]).unwrap();
        let mu = stationary(&c).unwrap();
        assert!((mu.get(0) - 5.0 / 6.0).abs() < 1e-6);
    }
}
