//! Mean first passage times, return times, diameter and Kemeny's constant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, Matrix};
use crate::{float_serde, tol, ChainModel, Error, Result, Scalar, StationaryDistribution};

/// `τᵢⱼ`, the expected number of steps to first reach `j` from `i`; the
/// diagonal holds mean return times.
///
/// Columns of transient targets are `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageMatrix<T> {
    tau: Matrix<T>,
}

impl<T: Scalar> PassageMatrix<T> {
    pub fn from_matrix(tau: Matrix<T>) -> Self {
        Self { tau }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.tau[(i, j)]
    }

    pub fn n(&self) -> usize {
        self.tau.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.tau
    }

    /// Target `j` has finite passage times (it is recurrent).
    pub fn is_finite_target(&self, j: usize) -> bool {
        self.tau[(j, j)].is_finite()
    }
}

/// Solves `τᵢⱼ = 1 + Σ_{k≠j} pᵢₖ τₖⱼ` over `i ≠ j` for each recurrent target
/// column, then fills the diagonal from the same recurrence.
pub fn first_passage_matrix<T: Scalar>(
    chain: &ChainModel<T>,
    mu: &StationaryDistribution<T>,
) -> Result<PassageMatrix<T>> {
    chain.require_unichain()?;
    let n = chain.n();
    if mu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: mu.len(),
        });
    }
    let p = chain.transition();
    let s = chain.structure();

    let columns: Vec<(usize, Vec<T>)> = (0..n)
        .into_par_iter()
        .map(|j| {
            if s.is_transient(j) {
                return Ok((j, vec![T::infinity(); n]));
            }
            let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
            let a = Matrix::identity(n - 1).sub(&p.principal(&others))?;
            let x = linalg::solve(&a, &vec![T::one(); n - 1], "first passage times")?;
            let mut col = vec![T::zero(); n];
            for (&i, v) in others.iter().zip(x) {
                col[i] = v;
            }
            col[j] = T::one() + others.iter().map(|&k| p[(j, k)] * col[k]).sum::<T>();
            Ok((j, col))
        })
        .collect::<Result<_>>()?;

    let mut tau = Matrix::zeros(n, n);
    for (j, col) in columns {
        for (i, v) in col.into_iter().enumerate() {
            tau[(i, j)] = v;
        }
    }
    Ok(PassageMatrix { tau })
}

/// `max |τᵢⱼ − 1 − Σ_{k≠j} pᵢₖ τₖⱼ|` over all `i` and finite targets `j`.
pub fn passage_residual<T: Scalar>(chain: &ChainModel<T>, tau: &PassageMatrix<T>) -> T {
    let n = chain.n();
    let mut worst = T::zero();
    for j in (0..n).filter(|&j| tau.is_finite_target(j)) {
        for i in 0..n {
            let rhs = T::one()
                + (0..n)
                    .filter(|&k| k != j)
                    .map(|k| chain.p(i, k) * tau.get(k, j))
                    .sum::<T>();
            worst = worst.max((tau.get(i, j) - rhs).abs());
        }
    }
    worst
}

/// `max |τᵢᵢ − 1/μᵢ|` over recurrent `i`.
pub fn return_time_check<T: Scalar>(tau: &PassageMatrix<T>, mu: &StationaryDistribution<T>) -> T {
    (0..tau.n())
        .filter(|&i| mu.get(i) > T::zero() && tau.is_finite_target(i))
        .map(|i| (tau.get(i, i) - T::one() / mu.get(i)).abs())
        .fold(T::zero(), T::max)
}

/// `D = max_{i≠j} τᵢⱼ`; `+∞` when a transient state exists, 0 for one state.
pub fn diameter<T: Scalar>(tau: &PassageMatrix<T>) -> T {
    let n = tau.n();
    let mut d = T::zero();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            d = d.max(tau.get(i, j));
        }
    }
    d
}

/// Kemeny's constant with the per-start values it is built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct KemenyResult<T> {
    /// Mean of `ηᵢ` over recurrent `i`.
    #[serde(with = "float_serde")]
    pub eta: T,
    /// `ηᵢ = Σ_{j≠i} μⱼ τᵢⱼ` for every state, transient ones included.
    #[serde(with = "float_serde::vec")]
    pub per_state: Vec<T>,
    /// `max ηᵢ − min ηᵢ` over recurrent `i`.
    #[serde(with = "float_serde")]
    pub max_deviation: T,
    /// States entering the constancy check.
    pub recurrent: Vec<usize>,
}

impl<T: Scalar> KemenyResult<T> {
    /// `maxᵢ ηᵢ` over all states.
    pub fn eta_max(&self) -> T {
        self.per_state
            .iter()
            .copied()
            .fold(T::neg_infinity(), T::max)
    }

    /// `ηᵢ − η` for every state (zero up to rounding on recurrent states).
    pub fn excess(&self) -> Vec<T> {
        self.per_state.iter().map(|&e| e - self.eta).collect()
    }
}

/// `ηᵢ = Σ_{j≠i} μⱼ τᵢⱼ`, with `0 · ∞ = 0` for transient targets.
pub fn kemeny<T: Scalar>(
    tau: &PassageMatrix<T>,
    mu: &StationaryDistribution<T>,
) -> Result<KemenyResult<T>> {
    let n = tau.n();
    if mu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: mu.len(),
        });
    }
    let per_state: Vec<T> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && mu.get(j) > T::zero())
                .map(|j| mu.get(j) * tau.get(i, j))
                .sum()
        })
        .collect();
    let recurrent: Vec<usize> = (0..n).filter(|&i| mu.get(i) > T::zero()).collect();
    let (lo, hi) = recurrent
        .iter()
        .map(|&i| per_state[i])
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), e| {
            (lo.min(e), hi.max(e))
        });
    let max_deviation = hi - lo;
    if !(max_deviation <= T::lit(tol::KEMENY_VIOLATION)) {
        return Err(Error::ConstancyViolation {
            deviation: max_deviation.as_f64(),
        });
    }
    let eta = recurrent.iter().map(|&i| per_state[i]).sum::<T>() / T::from_count(recurrent.len());
    Ok(KemenyResult {
        eta,
        per_state,
        max_deviation,
        recurrent,
    })
}
