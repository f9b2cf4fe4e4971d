//! European call pricing: the closed form and its Monte-Carlo estimator.
//!
//! The call benchmark is what the generator comparison hangs on: a biased
//! or structured uniform stream shows up directly in the relative pricing
//! error, with the closed form as ground truth.

use crate::error::{Error, Result};
use crate::rng::UniformSource;
use crate::sde::{gbm_exact_step, GbmParams};
use crate::special::normal_cdf;
use crate::transforms::NormalSource;

/// A European call on a lognormal underlying.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CallSpec {
    /// Spot price, positive.
    pub s: f64,
    /// Strike, positive.
    pub k: f64,
    /// Continuously compounded risk-free rate, per year.
    pub r: f64,
    /// Volatility, per square-root year.
    pub sigma: f64,
    /// Valuation time.
    pub t_now: f64,
    /// Expiry time, at or after `t_now`.
    pub t_expiry: f64,
}

impl CallSpec {
    pub fn new(s: f64, k: f64, r: f64, sigma: f64, t_now: f64, t_expiry: f64) -> Result<Self> {
        let check = |ok: bool, name: &'static str, value: f64, reason: &'static str| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::OutOfDomain {
                    name,
                    value,
                    reason,
                })
            }
        };
        check(s > 0.0, "s", s, "spot must be positive")?;
        check(k > 0.0, "k", k, "strike must be positive")?;
        check(r.is_finite(), "r", r, "rate must be finite")?;
        check(sigma >= 0.0, "sigma", sigma, "volatility must be nonnegative")?;
        check(t_now.is_finite(), "t_now", t_now, "valuation time must be finite")?;
        check(
            t_expiry >= t_now,
            "t_expiry",
            t_expiry,
            "expiry must not precede valuation",
        )?;
        Ok(Self {
            s,
            k,
            r,
            sigma,
            t_now,
            t_expiry,
        })
    }

    /// Spec with valuation at time zero and expiry `tau` years out.
    pub fn expiring_in(s: f64, k: f64, r: f64, sigma: f64, tau: f64) -> Result<Self> {
        Self::new(s, k, r, sigma, 0.0, tau)
    }

    /// Time to expiry in years.
    pub fn tau(&self) -> f64 {
        self.t_expiry - self.t_now
    }
}

/// Closed-form call price:
///
///   C = S N(d1) - K e^{-r tau} N(d2),
///   d1 = (ln(S/K) + (r + sigma^2/2) tau) / (sigma sqrt(tau)),
///   d2 = d1 - sigma sqrt(tau).
///
/// When sigma*sqrt(tau) = 0 the lognormal degenerates and the price is the
/// deterministic limit max(S - K e^{-r tau}, 0); at expiry that is the
/// intrinsic value.
pub fn bs_call_price(spec: &CallSpec) -> f64 {
    let tau = spec.tau();
    let discounted_strike = spec.k * (-spec.r * tau).exp();
    let vol = spec.sigma * tau.sqrt();
    if vol == 0.0 {
        return (spec.s - discounted_strike).max(0.0);
    }
    let d1 = ((spec.s / spec.k).ln() + (spec.r + 0.5 * spec.sigma * spec.sigma) * tau) / vol;
    let d2 = d1 - vol;
    spec.s * normal_cdf(d1) - discounted_strike * normal_cdf(d2)
}

/// Discounted average payoff of observed terminal prices.
pub fn discounted_mean_payoff(terminals: &[f64], k: f64, r: f64, tau: f64) -> Result<f64> {
    if terminals.is_empty() {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    let sum: f64 = terminals.iter().map(|&s| (s - k).max(0.0)).sum();
    Ok((-r * tau).exp() * sum / terminals.len() as f64)
}

/// Running Monte-Carlo estimates against the closed form.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PricingErrorReport {
    /// The closed-form price the errors are measured against.
    pub reference: f64,
    /// Simulation counts at which the running estimate was recorded.
    pub n_sims: Vec<usize>,
    /// Running estimate at each count.
    pub estimates: Vec<f64>,
    /// (estimate - reference) / reference at each count.
    pub relative_errors: Vec<f64>,
}

fn default_checkpoints(n: usize) -> Vec<usize> {
    let step = (n / 100).max(1);
    let mut cps: Vec<usize> = (1..=n / step).map(|k| k * step).collect();
    if *cps.last().unwrap() != n {
        cps.push(n);
    }
    cps
}

/// Monte-Carlo call price from `n` one-step exact terminal draws, with the
/// running relative error recorded at roughly 100 evenly spaced counts.
///
/// Draw i uses the i-th normal of the stream, so a torus-driven estimate
/// at n simulations uses exactly torus indices 1..=n.
pub fn mc_call_price<S: UniformSource>(
    spec: &CallSpec,
    n: usize,
    normals: &mut NormalSource<S>,
) -> Result<(f64, PricingErrorReport)> {
    mc_call_price_at(spec, &default_checkpoints(n), normals)
}

/// [`mc_call_price`] recording the running estimate at the given strictly
/// increasing simulation counts; the last count is the total sample size.
pub fn mc_call_price_at<S: UniformSource>(
    spec: &CallSpec,
    checkpoints: &[usize],
    normals: &mut NormalSource<S>,
) -> Result<(f64, PricingErrorReport)> {
    if checkpoints.is_empty() || checkpoints[0] == 0 {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::OutOfDomain {
            name: "checkpoints",
            value: f64::NAN,
            reason: "simulation counts must be strictly increasing",
        });
    }
    let reference = bs_call_price(spec);
    if reference <= 0.0 {
        return Err(Error::OutOfDomain {
            name: "reference",
            value: reference,
            reason: "relative error is undefined for a worthless call",
        });
    }

    let tau = spec.tau();
    let gbm = GbmParams::new(spec.s, spec.r, spec.sigma)?;
    let discount = (-spec.r * tau).exp();
    let n = *checkpoints.last().unwrap();
    let mut report = PricingErrorReport {
        reference,
        n_sims: Vec::with_capacity(checkpoints.len()),
        estimates: Vec::with_capacity(checkpoints.len()),
        relative_errors: Vec::with_capacity(checkpoints.len()),
    };
    let mut acc = 0.0;
    let mut next = 0;
    for i in 1..=n {
        let terminal = gbm_exact_step(&gbm, spec.s, tau, normals.next_normal()?);
        acc += (terminal - spec.k).max(0.0);
        if i == checkpoints[next] {
            let estimate = discount * acc / i as f64;
            report.n_sims.push(i);
            report.estimates.push(estimate);
            report.relative_errors.push((estimate - reference) / reference);
            next += 1;
        }
    }
    Ok((*report.estimates.last().unwrap(), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Lcg, Torus};
    use crate::sde::PathEnsemble;

    fn atm() -> CallSpec {
        CallSpec::expiring_in(100.0, 100.0, 0.04, 0.2, 0.5).unwrap()
    }

    #[test]
    fn worthless_strike_makes_the_call_a_forward_on_the_spot() {
        let spec = CallSpec::expiring_in(100.0, 1e-12, 0.04, 0.2, 0.5).unwrap();
        assert!((bs_call_price(&spec) - 100.0).abs() < 1e-7);
    }

    #[test]
    fn zero_volatility_is_the_discounted_forward() {
        let spec = CallSpec::expiring_in(100.0, 100.0, 0.05, 0.0, 1.0).unwrap();
        assert!((bs_call_price(&spec) - 4.877057549928599).abs() < 1e-12);
        // out of the money: worthless
        let spec = CallSpec::expiring_in(50.0, 100.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(bs_call_price(&spec), 0.0);
    }

    #[test]
    fn expiry_is_intrinsic_value() {
        let spec = CallSpec::new(110.0, 100.0, 0.04, 0.2, 3.0, 3.0).unwrap();
        assert_eq!(bs_call_price(&spec), 10.0);
        let spec = CallSpec::new(90.0, 100.0, 0.04, 0.2, 3.0, 3.0).unwrap();
        assert_eq!(bs_call_price(&spec), 0.0);
    }

    #[test]
    fn closed_form_matches_the_quadrature_oracle() {
        // e^{-r tau} E[(S_T - K)^+] under the lognormal density, computed
        // by high-precision quadrature split at the payoff kink
        assert!((bs_call_price(&atm()) - 6.6270780136147316).abs() < 1e-8);
    }

    #[test]
    fn price_is_monotone_in_each_parameter() {
        let base = atm();
        let mut last = 0.0;
        for i in 0..40 {
            let s = 60.0 + 2.0 * i as f64;
            let p = bs_call_price(&CallSpec { s, ..base });
            assert!(p >= last);
            last = p;
        }
        last = f64::INFINITY;
        for i in 0..40 {
            let k = 60.0 + 2.0 * i as f64;
            let p = bs_call_price(&CallSpec { k, ..base });
            assert!(p <= last);
            last = p;
        }
        last = 0.0;
        for i in 0..40 {
            let sigma = 0.01 * i as f64;
            let p = bs_call_price(&CallSpec { sigma, ..base });
            assert!(p >= last);
            last = p;
        }
        last = 0.0;
        for i in 0..40 {
            let t_expiry = 0.25 * i as f64;
            let p = bs_call_price(&CallSpec { t_expiry, ..base });
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn validation() {
        assert!(CallSpec::expiring_in(0.0, 100.0, 0.04, 0.2, 0.5).is_err());
        assert!(CallSpec::expiring_in(100.0, 0.0, 0.04, 0.2, 0.5).is_err());
        assert!(CallSpec::expiring_in(100.0, 100.0, 0.04, -0.2, 0.5).is_err());
        assert!(CallSpec::new(100.0, 100.0, 0.04, 0.2, 1.0, 0.5).is_err());
    }

    #[test]
    fn injected_terminals_average_the_payoff() {
        let c = discounted_mean_payoff(&[110.0, 90.0], 100.0, 0.0, 0.5).unwrap();
        assert_eq!(c, 5.0);
        assert!(discounted_mean_payoff(&[], 100.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn zero_volatility_estimate_hits_the_closed_form() {
        let spec = CallSpec::expiring_in(100.0, 90.0, 0.04, 0.0, 0.5).unwrap();
        let mut normals = NormalSource::standard(Lcg::minstd(1).unwrap());
        let (est, report) = mc_call_price(&spec, 500, &mut normals).unwrap();
        let closed = bs_call_price(&spec);
        assert!(((est - closed) / closed).abs() < 1e-13);
        assert!(report.relative_errors.iter().all(|r| r.abs() < 1e-13));
    }

    #[test]
    fn torus_driven_estimate_converges_tightly() {
        let mut normals = NormalSource::standard(Torus::new(2).unwrap());
        let (_, report) = mc_call_price(&atm(), 10_000, &mut normals).unwrap();
        assert_eq!(report.n_sims.len(), 100);
        assert_eq!(*report.n_sims.last().unwrap(), 10_000);

        let rho = |n: usize| {
            let i = report.n_sims.iter().position(|&m| m == n).unwrap();
            report.relative_errors[i].abs()
        };
        assert!(rho(10_000) < 0.002, "final |rho| = {}", rho(10_000));
        // magnitude shrinks decade over decade, and the late-grid envelope
        // sits well below the early one
        assert!(rho(1_000) < rho(100));
        assert!(rho(10_000) < rho(1_000));
        let early: f64 = report
            .n_sims
            .iter()
            .zip(&report.relative_errors)
            .filter(|(n, _)| **n <= 500)
            .map(|(_, r)| r.abs())
            .fold(0.0, f64::max);
        let late: f64 = report
            .n_sims
            .iter()
            .zip(&report.relative_errors)
            .filter(|(n, _)| **n >= 5_000)
            .map(|(_, r)| r.abs())
            .fold(0.0, f64::max);
        assert!(late < 0.2 * early, "late {late} vs early {early}");
    }

    #[test]
    fn discounted_terminal_is_a_martingale() {
        let spec = atm();
        let gbm = GbmParams::new(spec.s, spec.r, spec.sigma).unwrap();
        let mut normals = NormalSource::standard(Lcg::minstd(2).unwrap());
        let n = 100_000;
        let disc = (-spec.r * spec.tau()).exp();
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let x = disc * gbm_exact_step(&gbm, spec.s, spec.tau(), normals.next_normal().unwrap());
            sum += x;
            sum2 += x * x;
        }
        let mean = sum / n as f64;
        let se = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - spec.s).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn worthless_reference_is_rejected() {
        let spec = CallSpec::expiring_in(50.0, 100.0, 0.0, 0.0, 1.0).unwrap();
        let mut normals = NormalSource::standard(Lcg::minstd(3).unwrap());
        assert!(mc_call_price(&spec, 100, &mut normals).is_err());
    }

    #[test]
    fn checkpoint_validation() {
        let mut normals = NormalSource::standard(Lcg::minstd(4).unwrap());
        assert!(mc_call_price_at(&atm(), &[], &mut normals).is_err());
        assert!(mc_call_price_at(&atm(), &[0, 5], &mut normals).is_err());
        assert!(mc_call_price_at(&atm(), &[5, 5], &mut normals).is_err());
        let (_, rep) = mc_call_price_at(&atm(), &[3, 7], &mut normals).unwrap();
        assert_eq!(rep.n_sims, vec![3, 7]);
    }

    #[test]
    fn small_sample_checkpoints_cover_every_count() {
        let mut normals = NormalSource::standard(Lcg::minstd(5).unwrap());
        let (_, rep) = mc_call_price(&atm(), 7, &mut normals).unwrap();
        assert_eq!(rep.n_sims, vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn mean_path_examples() {
        let ens = PathEnsemble::from_rows(1.0, vec![vec![1.0; 4], vec![3.0; 4]]).unwrap();
        assert_eq!(ens.mean_path(), vec![2.0; 4]);
        let single = PathEnsemble::from_rows(1.0, vec![vec![1.0, 2.0, 4.0]]).unwrap();
        assert_eq!(ens.path(0), vec![1.0; 4]);
        assert_eq!(single.mean_path(), vec![1.0, 2.0, 4.0]);
    }
}
