use crate::error::{Error, Result};
use crate::sde::VasicekParams;

/// One observed point of a zero-coupon curve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CurvePoint {
    /// Maturity in years, positive.
    pub maturity: f64,
    /// Continuously compounded zero rate R(0, T), decimal.
    pub zero_rate: f64,
}

/// A zero-coupon curve as (maturity, rate) points with strictly increasing
/// maturities. Prices and rates are two views of the same curve through
/// P(0,T) = exp(-T R(0,T)).
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCouponCurve {
    points: Vec<CurvePoint>,
}

impl ZeroCouponCurve {
    pub fn new(points: Vec<CurvePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::CurveTooShort { need: 1, got: 0 });
        }
        let mut last = 0.0;
        for (i, p) in points.iter().enumerate() {
            if !p.maturity.is_finite() || !p.zero_rate.is_finite() || p.maturity <= last {
                return Err(Error::BadCurvePoint(i));
            }
            last = p.maturity;
        }
        Ok(Self { points })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(maturity, zero_rate)| CurvePoint {
                    maturity,
                    zero_rate,
                })
                .collect(),
        )
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one point
    }

    /// The shortest-maturity point, the curve's observable short end.
    pub fn shortest(&self) -> CurvePoint {
        self.points[0]
    }

    /// Discount prices exp(-T R) in maturity order.
    pub fn prices(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| zc_rate_to_price(p.zero_rate, p.maturity))
            .collect()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.zero_rate).collect()
    }

    pub fn maturities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.maturity).collect()
    }
}

/// P = exp(-T R).
pub fn zc_rate_to_price(rate: f64, maturity: f64) -> f64 {
    (-maturity * rate).exp()
}

/// R = -ln(P)/T.
pub fn zc_price_to_rate(price: f64, maturity: f64) -> f64 {
    -price.ln() / maturity
}

/// Continuously compounded zero rate of maturity `t` under the Vasicek
/// model:
///
///   R(t) = g - [(g - r0)(1 - e^{-at}) - (sigma^2/4a)(1 - e^{-at})^2] / (at),
///   g    = b - sigma^2/(2a).
///
/// At sigma = 0 this collapses to the affine form
/// R(t) = b - (b - r0)(1 - e^{-at})/(at).
pub fn vasicek_zc_rate(p: &VasicekParams, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::OutOfDomain {
            name: "t",
            value: t,
            reason: "maturity must be positive",
        });
    }
    let g = p.b - p.sigma * p.sigma / (2.0 * p.a);
    // 1 - e^{-at} without cancellation at small at
    let e = -(-p.a * t).exp_m1();
    Ok(g - ((g - p.r0) * e - p.sigma * p.sigma / (4.0 * p.a) * e * e) / (p.a * t))
}

/// Zero-coupon price P(t) = exp(-t R(t)) under the Vasicek model.
pub fn vasicek_zc_price(p: &VasicekParams, t: f64) -> Result<f64> {
    Ok((-t * vasicek_zc_rate(p, t)?).exp())
}
