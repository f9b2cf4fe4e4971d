use super::SdeModel;
use crate::error::{Error, Result};

fn require(ok: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name,
            value,
            reason,
        })
    }
}

/// Mean-reverting Gaussian short rate dr = a(b - r)dt + sigma dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VasicekParams {
    /// Mean-reversion speed, per year.
    pub a: f64,
    /// Long-run level the rate is pulled toward.
    pub b: f64,
    /// Initial rate.
    pub r0: f64,
    /// Volatility, per square-root year.
    pub sigma: f64,
}

impl VasicekParams {
    pub fn new(a: f64, b: f64, r0: f64, sigma: f64) -> Result<Self> {
        require(a > 0.0, "a", a, "mean-reversion speed must be positive")?;
        require(b.is_finite(), "b", b, "long-run level must be finite")?;
        require(r0.is_finite(), "r0", r0, "initial rate must be finite")?;
        require(sigma >= 0.0, "sigma", sigma, "volatility must be nonnegative")?;
        Ok(Self { a, b, r0, sigma })
    }

    /// E[r_t] = b - (b - r0) e^{-at}.
    pub fn mean_at(&self, t: f64) -> f64 {
        self.b - (self.b - self.r0) * (-self.a * t).exp()
    }
}

/// Exact transition over `delta`: the solved SDE gives a Gaussian step
///
///   r' = r e^{-a delta} + b(1 - e^{-a delta})
///        + sigma sqrt((1 - e^{-2 a delta}) / (2a)) eps
///
/// where the standard deviation comes from the Ito isometry on the
/// integrated solution.
pub fn vasicek_exact_step(p: &VasicekParams, r: f64, delta: f64, eps: f64) -> f64 {
    let decay = (-p.a * delta).exp();
    let sd = p.sigma * ((1.0 - decay * decay) / (2.0 * p.a)).sqrt();
    r * decay + p.b * (1.0 - decay) + sd * eps
}

impl SdeModel for VasicekParams {
    fn name(&self) -> &'static str {
        "vasicek"
    }

    fn initial(&self) -> f64 {
        self.r0
    }

    fn drift(&self, x: f64, _t: f64) -> f64 {
        self.a * (self.b - x)
    }

    fn diffusion(&self, _x: f64, _t: f64) -> f64 {
        self.sigma
    }

    fn diffusion_x(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }

    fn exact_step(&self, x: f64, delta: f64, eps: f64) -> Option<f64> {
        Some(vasicek_exact_step(self, x, delta, eps))
    }
}

/// Square-root short rate dr = a(b - r)dt + sigma sqrt(r) dB.
///
/// Discretized with full truncation: drift and diffusion evaluate at
/// max(r, 0), so an excursion below zero damps back without the square
/// root ever seeing a negative argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirParams {
    pub a: f64,
    pub b: f64,
    pub r0: f64,
    pub sigma: f64,
}

impl CirParams {
    pub fn new(a: f64, b: f64, r0: f64, sigma: f64) -> Result<Self> {
        require(a > 0.0, "a", a, "mean-reversion speed must be positive")?;
        require(b >= 0.0, "b", b, "long-run level must be nonnegative")?;
        require(r0 >= 0.0, "r0", r0, "initial rate must be nonnegative")?;
        require(sigma >= 0.0, "sigma", sigma, "volatility must be nonnegative")?;
        Ok(Self { a, b, r0, sigma })
    }

    /// Whether 2ab >= sigma^2, which keeps the continuous process away
    /// from zero.
    pub fn feller(&self) -> bool {
        2.0 * self.a * self.b >= self.sigma * self.sigma
    }
}

impl SdeModel for CirParams {
    fn name(&self) -> &'static str {
        "cir"
    }

    fn initial(&self) -> f64 {
        self.r0
    }

    fn drift(&self, x: f64, _t: f64) -> f64 {
        self.a * (self.b - x.max(0.0))
    }

    fn diffusion(&self, x: f64, _t: f64) -> f64 {
        self.sigma * x.max(0.0).sqrt()
    }

    fn diffusion_x(&self, x: f64, _t: f64) -> f64 {
        if x > 0.0 {
            self.sigma / (2.0 * x.sqrt())
        } else {
            0.0
        }
    }

    /// sigma sqrt(x) * sigma/(2 sqrt(x)) collapses to sigma^2/2, finite
    /// everywhere even though sigma_x diverges at the origin.
    fn diffusion_dx_product(&self, _x: f64, _t: f64) -> f64 {
        0.5 * self.sigma * self.sigma
    }

    fn exact_step(&self, _x: f64, _delta: f64, _eps: f64) -> Option<f64> {
        None
    }
}

/// Geometric Brownian motion dS = rate * S dt + sigma * S dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmParams {
    /// Initial price, positive.
    pub s0: f64,
    /// Drift; the risk-free rate under the pricing measure.
    pub rate: f64,
    /// Volatility, per square-root year.
    pub sigma: f64,
}

impl GbmParams {
    pub fn new(s0: f64, rate: f64, sigma: f64) -> Result<Self> {
        require(s0 > 0.0, "s0", s0, "initial price must be positive")?;
        require(rate.is_finite(), "rate", rate, "drift must be finite")?;
        require(sigma >= 0.0, "sigma", sigma, "volatility must be nonnegative")?;
        Ok(Self { s0, rate, sigma })
    }
}

/// Exact transition: s * exp((rate - sigma^2/2) delta + sigma sqrt(delta) eps).
pub fn gbm_exact_step(p: &GbmParams, s: f64, delta: f64, eps: f64) -> f64 {
    s * ((p.rate - 0.5 * p.sigma * p.sigma) * delta + p.sigma * delta.sqrt() * eps).exp()
}

impl SdeModel for GbmParams {
    fn name(&self) -> &'static str {
        "gbm"
    }

    fn initial(&self) -> f64 {
        self.s0
    }

    fn drift(&self, x: f64, _t: f64) -> f64 {
        self.rate * x
    }

    fn diffusion(&self, x: f64, _t: f64) -> f64 {
        self.sigma * x
    }

    fn diffusion_x(&self, _x: f64, _t: f64) -> f64 {
        self.sigma
    }

    fn exact_step(&self, x: f64, delta: f64, eps: f64) -> Option<f64> {
        Some(gbm_exact_step(self, x, delta, eps))
    }
}
