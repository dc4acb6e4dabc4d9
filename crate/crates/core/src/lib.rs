//! Numerical analysis of finite unichain Markov reward processes.
//!
//! The crate computes stationary and start-dependent limiting distributions,
//! mean first passage times, Kemeny's constant, the bias of a reward process
//! (by a Poisson-equation solve and by an explicit passage-time formula) and
//! a family of stationary-distribution perturbation bounds, together with a
//! seeded Monte Carlo engine that checks the finite-horizon concentration
//! bound behind those perturbation results.
//!
//! All linear algebra is generic over [`Scalar`] (`f32` or `f64`). The type
//! aliases at the crate root fix the scalar to `f64`, which is what the IO
//! layer and the command-line tool use.
//!
//! ```
//! use mrp_core::{Chain, Mrp};
//!
//! let chain = Chain::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
//! let mrp = Mrp::new(chain, vec![1.0, 0.0]).unwrap();
//! let mu = mrp_core::solve::stationary(mrp.chain()).unwrap();
//! assert!((mrp_core::solve::average_reward(&mrp, &mu).unwrap() - 0.5).abs() < 1e-12);
//! ```

// `!(x > y)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bias;
mod error;
pub mod float_serde;
pub mod io;
pub mod linalg;
pub mod mcsim;
pub mod model;
pub mod passage;
pub mod perturb;
mod scalar;
pub mod solve;
pub mod tol;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use bias::{BiasVector, Gauge};
pub use linalg::Matrix;
pub use model::{ChainModel, MrpModel, StateStructure};
pub use passage::{KemenyResult, PassageMatrix};
pub use perturb::{PerturbationReport, SubsetMode};
pub use solve::{LimitingDistribution, StationaryDistribution};

/// Chain over `f64`.
pub type Chain = ChainModel<f64>;
/// Markov reward process over `f64`.
pub type Mrp = MrpModel<f64>;
/// Dense `f64` matrix.
pub type Mat = Matrix<f64>;
/// Stationary distribution over `f64`.
pub type Stationary = StationaryDistribution<f64>;
/// Passage-time matrix over `f64`.
pub type Passage = PassageMatrix<f64>;
/// Bias vector over `f64`.
pub type Bias = BiasVector<f64>;

/// Chain over `f32`.
pub type Chain32 = ChainModel<f32>;
/// Markov reward process over `f32`.
pub type Mrp32 = MrpModel<f32>;
