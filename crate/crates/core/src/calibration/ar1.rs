use super::{FitReport, Method};
use crate::error::{Error, Result};

/// Ordinary least squares fit of r_{k+1} = alpha + beta r_k + sigma1 eps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Fit {
    /// Regression intercept.
    pub alpha_hat: f64,
    /// Regression slope; the exact-discretization mapping needs it in (0,1).
    pub beta_hat: f64,
    /// Residual standard deviation, divisor n (maximum-likelihood
    /// convention rather than the unbiased n-2).
    pub sigma1_hat: f64,
}

/// Regress a rate series on its one-step lag.
pub fn fit_ar1(rates: &[f64]) -> Result<Ar1Fit> {
    if rates.len() < 3 {
        return Err(Error::SampleTooSmall {
            need: 3,
            got: rates.len(),
        });
    }
    for &r in rates {
        if !r.is_finite() {
            return Err(Error::OutOfDomain {
                name: "rates",
                value: r,
                reason: "series must be finite",
            });
        }
    }
    let x = &rates[..rates.len() - 1];
    let y = &rates[1..];
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::ConstantSample);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let beta_hat = sxy / sxx;
    let alpha_hat = my - beta_hat * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let e = b - alpha_hat - beta_hat * a;
            e * e
        })
        .sum();
    Ok(Ar1Fit {
        alpha_hat,
        beta_hat,
        sigma1_hat: (ss / n).sqrt(),
    })
}

/// Map an AR(1) fit at observation step `delta` to Vasicek parameters via
/// the exact discretization:
///
///   a = -ln(beta)/delta,
///   b = alpha/(1 - beta),
///   sigma^2 = sigma1^2 * 2 ln(beta) / (delta (beta^2 - 1)).
///
/// The textbook mapping is written for delta = 1; dividing by delta turns
/// histories sampled at any frequency into per-year parameters. `r0` is
/// carried into the report for downstream pricing, the mapping itself
/// never uses it.
pub fn ar1_to_vasicek(fit: &Ar1Fit, delta: f64, r0: f64) -> Result<FitReport> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::OutOfDomain {
            name: "delta",
            value: delta,
            reason: "observation step must be positive",
        });
    }
    if !(fit.beta_hat > 0.0 && fit.beta_hat < 1.0) {
        return Err(Error::OutOfDomain {
            name: "beta_hat",
            value: fit.beta_hat,
            reason: "the log mapping needs a slope in (0,1)",
        });
    }
    let beta = fit.beta_hat;
    let a = -beta.ln() / delta;
    let b = fit.alpha_hat / (1.0 - beta);
    let sigma2 = fit.sigma1_hat * fit.sigma1_hat * 2.0 * beta.ln() / (delta * (beta * beta - 1.0));
    Ok(FitReport {
        method: Method::MleExact,
        a,
        b,
        sigma: sigma2.sqrt(),
        r0,
        objective_value: fit.sigma1_hat * fit.sigma1_hat,
        iterations: 0,
        fixed_sigma: None,
    })
}

/// AR(1) regression and exact-discretization mapping in one call; `r0` is
/// taken from the first observation.
pub fn fit_mle_exact(rates: &[f64], delta: f64) -> Result<FitReport> {
    let fit = fit_ar1(rates)?;
    ar1_to_vasicek(&fit, delta, rates[0])
}
