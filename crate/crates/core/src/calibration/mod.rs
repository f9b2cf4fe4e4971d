//! Short-rate parameter estimation three ways: exact-discretization
//! maximum likelihood on rate histories, least squares on a zero-coupon
//! curve, and indirect inference for models whose transition density is
//! out of reach.

mod adhoc;
mod ar1;
mod indirect;
mod simplex;
mod zc;

pub use adhoc::{fit_adhoc, AdhocObjective, FixedParams};
pub use ar1::{ar1_to_vasicek, fit_ar1, fit_mle_exact, Ar1Fit};
pub use indirect::{fit_indirect, naive_euler_estimate, AuxScheme, ShortRateModel};
pub use zc::{
    vasicek_zc_price, vasicek_zc_rate, zc_price_to_rate, zc_rate_to_price, CurvePoint,
    ZeroCouponCurve,
};

/// Which estimation route produced a [`FitReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// AR(1) regression mapped through the exact discretization.
    MleExact,
    /// Least squares on zero-coupon prices.
    AdhocPrices,
    /// Least squares on zero-coupon rates.
    AdhocRates,
    /// Indirect inference through an auxiliary discretized model.
    Indirect,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::MleExact => "mle_exact",
            Method::AdhocPrices => "adhoc_prices",
            Method::AdhocRates => "adhoc_rates",
            Method::Indirect => "indirect",
        })
    }
}

/// A fitted Vasicek parameter set with the diagnostics every estimation
/// route shares.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FitReport {
    pub method: Method,
    /// Mean-reversion speed, per year.
    pub a: f64,
    /// Long-run level.
    pub b: f64,
    /// Volatility, per square-root year.
    pub sigma: f64,
    /// Initial rate carried alongside the fit: the curve's short end for
    /// curve fits, the first observation for series fits.
    pub r0: f64,
    /// Achieved objective: least-squares value for the optimizing routes,
    /// residual variance for the regression route.
    pub objective_value: f64,
    /// Simplex iterations spent (all restarts combined); 0 for closed-form
    /// routes.
    pub iterations: u64,
    /// Volatility held fixed during the fit, if any.
    #[serde(skip)]
    pub fixed_sigma: Option<f64>,
}
