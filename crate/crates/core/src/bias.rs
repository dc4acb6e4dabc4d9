//! Bias of a Markov reward process.
//!
//! Two independent routes are provided: a direct solve of the Poisson
//! equation `ρ + λᵢ = rᵢ + Σⱼ pᵢⱼ λⱼ` under the gauge `Σ μᵢ λᵢ = 0`, and the
//! closed form `λ'ᵢ = −Σ_{j≠i} μⱼ rⱼ τᵢⱼ` in terms of mean first passage
//! times. Solutions of the Poisson equation are unique up to an additive
//! constant; [`Gauge`] records which representative a vector holds.
//!
//! The closed form satisfies the Poisson equation at every recurrent state.
//! At a transient state `i` its residual is exactly `rᵢ`, so the two routes
//! agree everywhere only when transient states carry zero reward.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, Matrix};
use crate::passage::PassageMatrix;
use crate::{float_serde, tol, Error, MrpModel, Result, Scalar, StationaryDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// `Σ μᵢ λᵢ = 0`.
    Canonical,
    /// The passage-time closed form, untranslated.
    PassageFormula,
    /// `max λ + min λ = 0`.
    Centered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BiasVector<T> {
    #[serde(with = "float_serde::vec")]
    pub values: Vec<T>,
    pub gauge: Gauge,
    /// Average reward the vector was computed against.
    #[serde(with = "float_serde")]
    pub rho: T,
}

impl<T: Scalar> BiasVector<T> {
    pub fn span(&self) -> T {
        span(&self.values)
    }

    /// Same vector shifted by `c` (gauge becomes whatever the caller says).
    pub fn shifted(&self, c: T, gauge: Gauge) -> Self {
        Self {
            values: self.values.iter().map(|&v| v + c).collect(),
            gauge,
            rho: self.rho,
        }
    }
}

fn check_dims<T: Scalar>(mrp: &MrpModel<T>, mu: &StationaryDistribution<T>) -> Result<()> {
    if mu.len() != mrp.n() {
        return Err(Error::DimensionMismatch {
            expected: mrp.n(),
            found: mu.len(),
        });
    }
    Ok(())
}

/// Canonical bias by a dense solve of `(I − P) λ = r − ρ`.
///
/// The system has rank `N − 1`; the equation of the state with the largest
/// stationary mass (lowest index on ties) is replaced by `Σ μᵢ λᵢ = 0`.
pub fn poisson_solve<T: Scalar>(
    mrp: &MrpModel<T>,
    mu: &StationaryDistribution<T>,
    rho: T,
) -> Result<BiasVector<T>> {
    check_dims(mrp, mu)?;
    let n = mrp.n();
    let p = mrp.chain().transition();
    let mut a = Matrix::identity(n).sub(p)?;
    let mut b: Vec<T> = mrp.reward().iter().map(|&r| r - rho).collect();
    let pivot = (0..n).fold(0, |best, i| if mu.get(i) > mu.get(best) { i } else { best });
    a.row_mut(pivot).copy_from_slice(mu.as_slice());
    b[pivot] = T::zero();
    let values = linalg::solve(&a, &b, "Poisson equation")?;
    Ok(BiasVector {
        values,
        gauge: Gauge::Canonical,
        rho,
    })
}

/// `λ'ᵢ = −Σ_{j≠i} μⱼ rⱼ τᵢⱼ`, summed over recurrent `j` (`μⱼ = 0` removes
/// the infinite transient columns).
pub fn bias_from_passage<T: Scalar>(
    mrp: &MrpModel<T>,
    mu: &StationaryDistribution<T>,
    tau: &PassageMatrix<T>,
) -> Result<BiasVector<T>> {
    check_dims(mrp, mu)?;
    let n = mrp.n();
    if tau.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: tau.n(),
        });
    }
    let r = mrp.reward();
    let values = (0..n)
        .map(|i| {
            T::zero()
                - (0..n)
                    .filter(|&j| j != i && mu.get(j) > T::zero())
                    .map(|j| mu.get(j) * r[j] * tau.get(i, j))
                    .sum::<T>()
        })
        .collect();
    let rho = linalg::dot(mu.as_slice(), r);
    Ok(BiasVector {
        values,
        gauge: Gauge::PassageFormula,
        rho,
    })
}

/// Signed residuals `rᵢ + Σⱼ pᵢⱼ λⱼ − λᵢ − ρ`.
pub fn poisson_residuals<T: Scalar>(mrp: &MrpModel<T>, bias: &BiasVector<T>) -> Vec<T> {
    let pl = mrp.chain().transition().mul_vec(&bias.values);
    mrp.reward()
        .iter()
        .zip(pl)
        .zip(&bias.values)
        .map(|((&r, s), &l)| r + s - l - bias.rho)
        .collect()
}

/// `maxᵢ |rᵢ + Σⱼ pᵢⱼ λⱼ − λᵢ − ρ|`.
pub fn poisson_residual<T: Scalar>(mrp: &MrpModel<T>, bias: &BiasVector<T>) -> T {
    linalg::norm_inf(&poisson_residuals(mrp, bias))
}

/// Shifts so that `Σ μᵢ λᵢ = 0`.
pub fn to_canonical<T: Scalar>(
    bias: &BiasVector<T>,
    mu: &StationaryDistribution<T>,
) -> BiasVector<T> {
    let c = linalg::dot(mu.as_slice(), &bias.values);
    bias.shifted(-c, Gauge::Canonical)
}

/// `λ̄ᵢ = λᵢ − ½(max λ + min λ)`, so that `‖λ̄‖∞ = ½ span(λ)`.
pub fn to_centered<T: Scalar>(bias: &BiasVector<T>) -> BiasVector<T> {
    let (lo, hi) = extremes(&bias.values);
    let mid = (hi + lo) / T::lit(2.0);
    bias.shifted(-mid, Gauge::Centered)
}

fn extremes<T: Scalar>(v: &[T]) -> (T, T) {
    v.iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

/// `max λ − min λ` (0 for an empty vector).
pub fn span<T: Scalar>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let (lo, hi) = extremes(values);
    hi - lo
}

pub fn bias_span<T: Scalar>(bias: &BiasVector<T>) -> T {
    bias.span()
}

/// `span(λ) ≤ D`, defined for rewards in `[0, 1]`; trivially true for `D = ∞`.
pub fn check_diameter_bound<T: Scalar>(mrp: &MrpModel<T>, span: T, diameter: T) -> Result<bool> {
    if let Some(i) = mrp
        .reward()
        .iter()
        .position(|&r| !(r >= T::zero() && r <= T::one()))
    {
        return Err(Error::RewardOutOfRange {
            index: i,
            value: mrp.reward()[i].as_f64(),
        });
    }
    if diameter.is_infinite() {
        return Ok(true);
    }
    Ok(span <= diameter + T::lit(tol::DIAMETER))
}
