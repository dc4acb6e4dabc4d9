//! Default numerical tolerances, stated in `f64`.
//!
//! Checks on `f32` data go through [`Scalar::noise_floor`](crate::Scalar::noise_floor),
//! which never lets a tolerance drop below a few ulps of the working type.

/// Maximum deviation of a row sum from 1 that is absorbed by renormalization.
pub const ROW_SUM: f64 = 1e-12;
/// Stationary distribution must sum to 1 within this.
pub const MU_SUM: f64 = 1e-10;
/// Negative stationary entries down to `-MU_CLAMP` are treated as zero.
pub const MU_CLAMP: f64 = 1e-12;
/// Fixed-point residual `‖μP − μ‖∞`.
pub const STATIONARY_RESIDUAL: f64 = 1e-10;
/// Return time `τᵢᵢ = 1/μᵢ` and passage recurrence residuals.
pub const PASSAGE: f64 = 1e-9;
/// Poisson-equation residual of a bias vector.
pub const POISSON_RESIDUAL: f64 = 1e-8;
/// `|Σ μᵢλᵢ|` for a canonical bias.
pub const CANONICAL_GAUGE: f64 = 1e-9;
/// `|max λ̄ + min λ̄|` for a centered bias.
pub const CENTERED: f64 = 1e-12;
/// Spread of Kemeny's per-state values over recurrent states.
pub const KEMENY_CONSTANCY: f64 = 1e-9;
/// Spread above which [`kemeny`](crate::passage::kemeny) reports an upstream failure.
pub const KEMENY_VIOLATION: f64 = 1e-6;
/// Slack when comparing an actual deviation against a perturbation bound.
pub const BOUND: f64 = 1e-9;
/// Slack for the bias-span versus diameter comparison.
pub const DIAMETER: f64 = 1e-9;
/// Slack for the ordering of the subset bound below the Kemeny bound.
pub const BOUND_ORDER: f64 = 1e-12;
/// Relative pivot size below which an LU factorization is declared singular.
pub const PIVOT: f64 = 1e-13;
