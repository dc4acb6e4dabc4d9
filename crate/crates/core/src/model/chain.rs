use std::sync::OnceLock;

use crate::linalg::Matrix;
use crate::{tol, Error, Result, Scalar};

use super::structure::{classify_matrix, StateStructure};

/// Validated row-stochastic transition matrix.
///
/// Immutable once built; the structural classification is computed at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainModel<T> {
    transition: Matrix<T>,
    labels: Option<Vec<String>>,
    structure: StateStructure,
}

/// Validates a raw matrix.
///
/// Rows whose sum is within [`tol::ROW_SUM`] of 1 are renormalized; larger
/// deviations are rejected, as are negative or non-finite entries.
pub fn validate_chain<T: Scalar>(raw: Vec<Vec<T>>) -> Result<ChainModel<T>> {
    let n = raw.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                row,
                len: r.len(),
                n,
            });
        }
    }
    let mut transition = Matrix::from_rows(raw)?;
    let eps = T::noise_floor(tol::ROW_SUM);
    for i in 0..n {
        let row = transition.row_mut(i);
        for (j, &p) in row.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
            if p < T::zero() {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
        let sum: T = row.iter().copied().sum();
        if (sum - T::one()).abs() > eps {
            return Err(Error::RowSumViolation {
                row: i,
                sum: sum.as_f64(),
            });
        }
        if sum != T::one() {
            for p in row.iter_mut() {
                *p = *p / sum;
            }
        }
    }
    let structure = classify_matrix(&transition);
    Ok(ChainModel {
        transition,
        labels: None,
        structure,
    })
}

impl<T: Scalar> ChainModel<T> {
    /// See [`validate_chain`].
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        validate_chain(rows)
    }

    pub fn from_matrix(m: &Matrix<T>) -> Result<Self> {
        validate_chain(m.to_rows())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.transition.rows()
    }

    #[inline]
    pub fn transition(&self) -> &Matrix<T> {
        &self.transition
    }

    #[inline]
    pub fn p(&self, i: usize, j: usize) -> T {
        self.transition[(i, j)]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of state `i`, falling back to its 1-based index.
    pub fn label(&self, i: usize) -> String {
        self.labels
            .as_ref()
            .map_or_else(|| (i + 1).to_string(), |l| l[i].clone())
    }

    #[inline]
    pub fn structure(&self) -> &StateStructure {
        &self.structure
    }

    pub fn is_unichain(&self) -> bool {
        self.structure.is_unichain
    }

    pub fn require_unichain(&self) -> Result<()> {
        if self.structure.is_unichain {
            Ok(())
        } else {
            Err(Error::NotUnichain {
                classes: self.structure.recurrent_classes.clone(),
            })
        }
    }

    pub fn check_state(&self, state: usize) -> Result<()> {
        if state < self.n() {
            Ok(())
        } else {
            Err(Error::StateOutOfRange { state, n: self.n() })
        }
    }

    /// Same chain in another scalar type (revalidated).
    pub fn cast<U: Scalar>(&self) -> Result<ChainModel<U>> {
        let mut c = ChainModel::from_matrix(&self.transition.map(|x| U::lit(x.as_f64())))?;
        c.labels = self.labels.clone();
        Ok(c)
    }
}

/// A chain paired with a per-state mean reward.
#[derive(Debug, Clone)]
pub struct MrpModel<T> {
    chain: ChainModel<T>,
    reward: Vec<T>,
    rho: OnceLock<T>,
}

impl<T: Scalar> PartialEq for MrpModel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.chain == other.chain && self.reward == other.reward
    }
}

impl<T: Scalar> MrpModel<T> {
    pub fn new(chain: ChainModel<T>, reward: Vec<T>) -> Result<Self> {
        if reward.len() != chain.n() {
            return Err(Error::DimensionMismatch {
                expected: chain.n(),
                found: reward.len(),
            });
        }
        if let Some(i) = reward.iter().position(|r| !r.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self {
            chain,
            reward,
            rho: OnceLock::new(),
        })
    }

    #[inline]
    pub fn chain(&self) -> &ChainModel<T> {
        &self.chain
    }

    #[inline]
    pub fn reward(&self) -> &[T] {
        &self.reward
    }

    pub fn n(&self) -> usize {
        self.chain.n()
    }

    /// Same chain with a different reward.
    pub fn with_reward(&self, reward: Vec<T>) -> Result<Self> {
        Self::new(self.chain.clone(), reward)
    }

    /// Average reward, computed from the stationary distribution on first use.
    pub fn rho(&self) -> Result<T> {
        if let Some(&r) = self.rho.get() {
            return Ok(r);
        }
        let mu = crate::solve::stationary(&self.chain)?;
        let r = crate::solve::average_reward(self, &mu)?;
        Ok(*self.rho.get_or_init(|| r))
    }

    pub fn rewards_in_unit_interval(&self) -> bool {
        self.reward.iter().all(|&r| r >= T::zero() && r <= T::one())
    }
}
