//! Simulation toolkit for continuous-time stochastic processes: uniform
//! and quasi-random number sources, normal/Poisson transforms, a
//! statistical test battery, SDE discretization schemes with strong-order
//! measurement, Monte-Carlo option pricing, and short-rate model
//! calibration.
//!
//! The crate is organized bottom-up:
//!
//! - [`rng`]: linear congruential and additive-torus uniform sources
//!   behind the [`rng::UniformSource`] trait.
//! - [`transforms`]: uniform-to-normal transforms ([`transforms::NormalSource`])
//!   and other inverse-CDF utilities.
//! - [`stats`]: chi-square, Kolmogorov-Smirnov, Anderson-Darling, poker
//!   and correlogram tests with analytic p-values.
//! - [`sde`]: Vasicek, Cox-Ingersoll-Ross and geometric Brownian motion
//!   models, exact/Euler/Milstein stepping, trajectory ensembles, and
//!   strong-convergence measurement.
//! - [`pricing`]: Black-Scholes closed form and its Monte-Carlo estimator.
//! - [`calibration`]: AR(1) maximum-likelihood mapping, least-squares
//!   curve fitting, and indirect inference for the short-rate models.
//!
//! Everything is deterministic given source seeds; parallel trajectory
//! generation reproduces the sequential stream bit for bit.

pub mod calibration;
pub mod error;
pub mod pricing;
pub mod rng;
pub mod sde;
pub mod special;
pub mod stats;
pub mod transforms;

pub use error::{Error, Result};
