//! Lower bounds on information divergence for natural exponential families.
//!
//! The crate couples three layers:
//!
//! * [`expfam`] — a catalog of analytic natural exponential families
//!   (Gaussian, Gamma, Poisson, binomial, negative binomial, inverse
//!   Gaussian) with closed-form log-partition functions, mean maps,
//!   variance functions, exact divergences, and the quadratic lower bound
//!   `D(Q^mu || Q^nu) >= (mu - nu)^2 / (2 V(nu))` valid when the variance
//!   function is monotone on the right side.
//! * [`orthopoly`] + [`tilt`] — Laguerre and probabilists' Hermite
//!   polynomials, their orthonormal variants, and exponentially tilted
//!   families `dQ_beta/dQ_0 = exp(beta T(x)) / Z(beta)` with a polynomial
//!   sufficient statistic `T` over a Gamma or standard Gaussian base,
//!   including information projection onto a moment constraint.
//! * [`verify`] — audits that pin every bound to an explicit margin:
//!   the universal constants `beta0` and `alpha0`, the half-integer shape
//!   condition table, moment-based bound audits for arbitrary discrete or
//!   grid distributions, and the degree-3 counterexample reproduction.
//!
//! All numerical work flows through [`numerics`]: generalized
//! Gauss-Laguerre and Gauss-Hermite quadrature (Golub-Welsch), bracketed
//! root finding, and divergence evaluation for discrete and grid
//! distributions.

pub mod expfam;
pub mod numerics;
pub mod orthopoly;
pub mod tilt;
pub mod verify;

mod error;

pub use error::{Error, Result};
