use super::simplex::{nelder_mead, Bounds, SimplexOptions, A_BOUNDS, B_BOUNDS, SIGMA_BOUNDS};
use super::zc::{vasicek_zc_price, vasicek_zc_rate, ZeroCouponCurve};
use super::{FitReport, Method};
use crate::error::{Error, Result};
use crate::sde::VasicekParams;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which observable the least-squares fit matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdhocObjective {
    /// Squared differences of discount bond prices.
    Prices,
    /// Squared differences of continuously compounded zero rates.
    Rates,
}

impl fmt::Display for AdhocObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdhocObjective::Prices => "prices",
            AdhocObjective::Rates => "rates",
        })
    }
}

/// Parameters pinned to a value instead of searched over.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FixedParams {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub sigma: Option<f64>,
}

#[derive(Clone, Copy)]
enum Slot {
    Fixed(f64),
    Free(usize),
}

// restarting from several corners of the box guards against the flat
// valleys the curve objective develops when a is small
const STARTS: [[f64; 3]; 5] = [
    [0.2, 0.05, 0.05],
    [0.5, 0.03, 0.1],
    [1.0, 0.08, 0.02],
    [0.1, 0.1, 0.2],
    [2.0, 0.01, 0.01],
];

/// Least-squares fit of (a, b, sigma) to an observed zero-coupon curve,
/// holding `r0` at the given value (default: the shortest observed rate).
///
/// The search runs an unconstrained simplex in logit-transformed
/// coordinates, boxed to a in [1e-4, 5], b in [-0.05, 0.25],
/// sigma in [0, 0.5], restarted from five points; the best restart wins.
pub fn fit_adhoc(
    curve: &ZeroCouponCurve,
    objective: AdhocObjective,
    fixed: FixedParams,
    r0: Option<f64>,
) -> Result<FitReport> {
    let r0 = match r0 {
        Some(v) if !v.is_finite() => {
            return Err(Error::OutOfDomain {
                name: "r0",
                value: v,
                reason: "short rate must be finite",
            })
        }
        Some(v) => v,
        None => curve.shortest().zero_rate,
    };
    for (fixed_value, name) in [(fixed.a, "a"), (fixed.b, "b"), (fixed.sigma, "sigma")] {
        if let Some(v) = fixed_value {
            if !v.is_finite() {
                return Err(Error::OutOfDomain {
                    name,
                    value: v,
                    reason: "fixed value must be finite",
                });
            }
        }
    }

    let mut slots = [Slot::Fixed(0.0); 3];
    let mut bounds: Vec<Bounds> = Vec::new();
    for (i, fixed_value) in [fixed.a, fixed.b, fixed.sigma].into_iter().enumerate() {
        slots[i] = match fixed_value {
            Some(v) => Slot::Fixed(v),
            None => {
                bounds.push([A_BOUNDS, B_BOUNDS, SIGMA_BOUNDS][i]);
                Slot::Free(bounds.len() - 1)
            }
        };
    }
    let n_free = bounds.len();
    if n_free == 0 {
        return Err(Error::NothingFree);
    }
    if curve.len() < n_free {
        return Err(Error::CurveTooShort {
            need: n_free,
            got: curve.len(),
        });
    }

    let assemble = |free: &[f64]| -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, slot) in slots.iter().enumerate() {
            out[i] = match *slot {
                Slot::Fixed(v) => v,
                Slot::Free(j) => bounds[j].from_free(free[j]),
            };
        }
        out
    };

    let observed: Vec<(f64, f64)> = curve
        .points()
        .iter()
        .map(|pt| {
            let target = match objective {
                AdhocObjective::Prices => (-pt.maturity * pt.zero_rate).exp(),
                AdhocObjective::Rates => pt.zero_rate,
            };
            (pt.maturity, target)
        })
        .collect();

    let mut f = |free: &[f64]| -> Result<f64> {
        let [a, b, sigma] = assemble(free);
        let p = VasicekParams::new(a, b, r0, sigma)?;
        let mut ss = 0.0;
        for &(t, target) in &observed {
            let model = match objective {
                AdhocObjective::Prices => vasicek_zc_price(&p, t)?,
                AdhocObjective::Rates => vasicek_zc_rate(&p, t)?,
            };
            let d = model - target;
            ss += d * d;
        }
        Ok(ss)
    };

    let opts = SimplexOptions {
        f_tol: 1e-24,
        x_tol: 1e-12,
        max_iters: 4000,
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut total_iterations: u64 = 0;
    let mut any_converged = false;
    for start in STARTS {
        let free_start: Vec<f64> = slots
            .iter()
            .zip(start)
            .filter_map(|(slot, s)| match slot {
                Slot::Fixed(_) => None,
                Slot::Free(j) => Some(bounds[*j].to_free(s)),
            })
            .collect();
        let outcome = nelder_mead(&mut f, &free_start, &opts)?;
        total_iterations += outcome.iterations;
        any_converged |= outcome.converged;
        if best.as_ref().is_none_or(|(_, v)| outcome.value < *v) {
            best = Some((outcome.x, outcome.value));
        }
    }
    let (free, objective_value) = best.unwrap();
    let [a, b, sigma] = assemble(&free);
    let report = FitReport {
        method: match objective {
            AdhocObjective::Prices => Method::AdhocPrices,
            AdhocObjective::Rates => Method::AdhocRates,
        },
        a,
        b,
        sigma,
        r0,
        objective_value,
        iterations: total_iterations,
        fixed_sigma: fixed.sigma,
    };
    if !any_converged {
        return Err(Error::OptimFailed {
            iterations: total_iterations,
            best: Box::new(report),
        });
    }
    Ok(report)
}
