//! Diffusion models and their discretization schemes.
//!
//! A model supplies drift and diffusion coefficients (and, when the SDE
//! solves in closed form, an exact one-step transition). The steppers are
//! pure functions of (state, step, normal draw); the engine in [`engine`]
//! lays them onto a uniform time grid.

mod convergence;
mod engine;
mod models;

pub use convergence::{measure_strong_order, ConvergenceReport};
pub use engine::{capitalization_bond, simulate_ensemble, simulate_ensemble_par, PathEnsemble};
pub use models::{gbm_exact_step, vasicek_exact_step, CirParams, GbmParams, VasicekParams};

use crate::error::{Error, Result};

/// Discretization scheme for advancing a diffusion by one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Closed-form transition; equal in law to the continuous process.
    Exact,
    /// First-order Ito-Taylor truncation.
    Euler,
    /// Euler plus the second-order correction in the diffusion term.
    Milstein,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Exact => "exact",
            Scheme::Euler => "euler",
            Scheme::Milstein => "milstein",
        })
    }
}

/// A time-homogeneous scalar diffusion dX = mu(X)dt + sigma(X)dB.
///
/// `t` is threaded through the coefficient calls so a time-dependent model
/// fits the same interface; the models in this crate ignore it.
pub trait SdeModel {
    fn name(&self) -> &'static str;

    /// State the trajectory engine starts every path from.
    fn initial(&self) -> f64;

    /// Drift coefficient mu(x, t).
    fn drift(&self, x: f64, t: f64) -> f64;

    /// Diffusion coefficient sigma(x, t), nonnegative on the admissible
    /// domain.
    fn diffusion(&self, x: f64, t: f64) -> f64;

    /// State derivative of the diffusion coefficient.
    fn diffusion_x(&self, x: f64, t: f64) -> f64;

    /// The product sigma * sigma_x appearing in the Milstein correction.
    ///
    /// Overridable because the product can be smoother than its factors:
    /// for the square-root diffusion it is the constant sigma^2/2 even
    /// though sigma_x blows up at the origin.
    fn diffusion_dx_product(&self, x: f64, t: f64) -> f64 {
        self.diffusion(x, t) * self.diffusion_x(x, t)
    }

    /// Closed-form transition over a step of length `delta` driven by the
    /// standard normal `eps`, when one exists.
    fn exact_step(&self, x: f64, delta: f64, eps: f64) -> Option<f64>;
}

fn check_step(delta: f64) -> Result<()> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::OutOfDomain {
            name: "delta",
            value: delta,
            reason: "step length must be positive and finite",
        });
    }
    Ok(())
}

/// One Euler step: x + mu(x)delta + sigma(x) sqrt(delta) eps.
pub fn euler_step<M: SdeModel + ?Sized>(
    model: &M,
    x: f64,
    t: f64,
    delta: f64,
    eps: f64,
) -> Result<f64> {
    check_step(delta)?;
    Ok(x + model.drift(x, t) * delta + model.diffusion(x, t) * delta.sqrt() * eps)
}

/// One Milstein step: the Euler step plus (1/2) sigma sigma_x delta (eps^2 - 1).
///
/// Bit-identical to [`euler_step`] whenever sigma_x vanishes identically.
pub fn milstein_step<M: SdeModel + ?Sized>(
    model: &M,
    x: f64,
    t: f64,
    delta: f64,
    eps: f64,
) -> Result<f64> {
    let base = euler_step(model, x, t, delta, eps)?;
    Ok(base + 0.5 * model.diffusion_dx_product(x, t) * delta * (eps * eps - 1.0))
}

/// Advance one step under the chosen scheme.
pub fn step<M: SdeModel + ?Sized>(
    model: &M,
    scheme: Scheme,
    x: f64,
    t: f64,
    delta: f64,
    eps: f64,
) -> Result<f64> {
    match scheme {
        Scheme::Exact => {
            check_step(delta)?;
            model
                .exact_step(x, delta, eps)
                .ok_or(Error::ExactStepUnavailable(model.name()))
        }
        Scheme::Euler => euler_step(model, x, t, delta, eps),
        Scheme::Milstein => milstein_step(model, x, t, delta, eps),
    }
}
