//! Rankin-Cohen brackets, reconstructed three ways.
//!
//! This crate implements the family of bidifferential operators
//! `RC^(l)` acting on holomorphic functions of two variables, together
//! with the machinery needed to verify their structural identities:
//!
//! - [`exact`] — arbitrary-precision rationals, Gaussian rationals,
//!   exact `rational * pi^k` values, and combinatorial primitives;
//! - [`poly`] — univariate/bivariate polynomials over an exact or
//!   complex floating coefficient field;
//! - [`rc`] — the bracket coefficients, their application to
//!   polynomials, and the scaling constant tying them to the contour
//!   transform;
//! - [`jacobi`] — Jacobi polynomials, their two-variable inflation and
//!   the correspondence with the bracket coefficients;
//! - [`contour`] — circle contours, Cauchy coefficient extraction, the
//!   kernels `A^(l)`, `A`, `A^(h)` and the transforms built from them;
//! - [`covariance`] — the Moebius action, the weight-`lambda`
//!   representations, and residuals for every covariance identity;
//! - [`constants`] — the normalization constants `c_l`, `r_l`, `a_l`,
//!   their limits and asymptotics;
//! - [`verify`] — seeded verification sweeps shared by the CLI and the
//!   acceptance suite.
//!
//! Algebraic identities are checked exactly over the rationals; the
//! integral transforms are checked against the exact path to quadrature
//! tolerance.

pub mod constants;
pub mod contour;
pub mod covariance;
pub mod exact;
pub mod jacobi;
pub mod poly;
pub mod rc;
pub mod verify;

pub use exact::{GaussianRational, PiPower, Rational};
pub use poly::{BivariatePoly, Scalar, UnivariatePoly, Variable};
pub use rc::WeightPair;

/// Crate-wide error type aggregating the per-module failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] exact::ExactError),
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Contour(#[from] contour::ContourError),
    #[error(transparent)]
    Covariance(#[from] covariance::CovarianceError),
    #[error(transparent)]
    Constants(#[from] constants::ConstantsError),
    #[error("invalid weight: lambda1 and lambda2 must be >= 1")]
    InvalidWeight,
}

pub type Result<T> = std::result::Result<T, Error>;
