use super::ar1::fit_ar1;
use super::simplex::{nelder_mead, Bounds, SimplexOptions, A_BOUNDS, B_BOUNDS, SIGMA_BOUNDS};
use super::{FitReport, Method};
use crate::error::{Error, Result};
use crate::rng::Lcg;
use crate::sde::{milstein_step, CirParams};
use crate::transforms::NormalSource;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Short-rate model being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShortRateModel {
    Vasicek,
    Cir,
}

impl fmt::Display for ShortRateModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShortRateModel::Vasicek => "vasicek",
            ShortRateModel::Cir => "cir",
        })
    }
}

/// Discretization whose pseudo-likelihood supplies the auxiliary estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxScheme {
    Euler,
    Milstein,
}

impl fmt::Display for AuxScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuxScheme::Euler => "euler",
            AuxScheme::Milstein => "milstein",
        })
    }
}

/// Simulated series are stepped this many Milstein substeps per
/// observation interval; the auxiliary estimator only sees the coarse
/// grid, mirroring how real data hides the path between quotes.
const CIR_SIM_SUBSTEPS: usize = 8;

// the square-root process needs b and sigma strictly positive, so its
// search box is floored away from zero where the Vasicek box is not
const CIR_B_BOUNDS: Bounds = Bounds { lo: 1e-4, hi: 0.25 };
const CIR_SIGMA_BOUNDS: Bounds = Bounds { lo: 1e-4, hi: 0.5 };

/// Euler-regression auxiliary statistics for the Vasicek model: the raw
/// AR(1) coefficients (alpha, beta, sigma1). Matching these directly,
/// rather than their parameter mapping, keeps the objective smooth where
/// the mapping's log would blow up.
fn vasicek_aux(series: &[f64]) -> Result<[f64; 3]> {
    let fit = fit_ar1(series)?;
    Ok([fit.alpha_hat, fit.beta_hat, fit.sigma1_hat])
}

/// Euler pseudo-MLE of the square-root process, as the mapped parameter
/// triple (a, b, sigma).
///
/// Dividing the Euler scheme by sqrt(r) turns it into a homoskedastic
/// regression z = c1 u1 + c2 u2 + sigma sqrt(delta) e with z =
/// (r' - r)/sqrt(r), u1 = 1/sqrt(r), u2 = sqrt(r); weighted least squares
/// then gives c1 = ab delta and c2 = -a delta.
fn cir_aux(series: &[f64], delta: f64) -> Result<[f64; 3]> {
    if series.len() < 3 {
        return Err(Error::SampleTooSmall {
            need: 3,
            got: series.len(),
        });
    }
    let (mut g11, mut g12, mut g22) = (0.0f64, 0.0f64, 0.0f64);
    let (mut r1, mut r2) = (0.0f64, 0.0f64);
    for w in series.windows(2) {
        let s = w[0].max(1e-12).sqrt();
        let z = (w[1] - w[0]) / s;
        let (u1, u2) = (1.0 / s, s);
        g11 += u1 * u1;
        g12 += u1 * u2;
        g22 += u2 * u2;
        r1 += z * u1;
        r2 += z * u2;
    }
    let det = g11 * g22 - g12 * g12;
    if det <= 1e-12 * g11 * g22 {
        return Err(Error::ConstantSample);
    }
    let c1 = (r1 * g22 - r2 * g12) / det;
    let c2 = (g11 * r2 - g12 * r1) / det;
    let mut ss = 0.0;
    for w in series.windows(2) {
        let s = w[0].max(1e-12).sqrt();
        let res = (w[1] - w[0]) / s - c1 / s - c2 * s;
        ss += res * res;
    }
    let s1 = (ss / (series.len() - 1) as f64).sqrt();
    let a = -c2 / delta;
    let b = if a != 0.0 { c1 / (a * delta) } else { 0.0 };
    Ok([a, b, s1 / delta.sqrt()])
}

/// Parameter estimate obtained by reading the auxiliary regression as if
/// the discretized scheme were the true transition. Biased whenever the
/// observation step is coarse; the indirect estimator exists to undo
/// exactly that.
pub fn naive_euler_estimate(
    observations: &[f64],
    delta: f64,
    model: ShortRateModel,
) -> Result<(f64, f64, f64)> {
    check_delta(delta)?;
    match model {
        ShortRateModel::Vasicek => {
            let fit = fit_ar1(observations)?;
            let a = (1.0 - fit.beta_hat) / delta;
            let b = fit.alpha_hat / (1.0 - fit.beta_hat);
            Ok((a, b, fit.sigma1_hat / delta.sqrt()))
        }
        ShortRateModel::Cir => {
            let [a, b, sigma] = cir_aux(observations, delta)?;
            Ok((a, b, sigma))
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::OutOfDomain {
            name: "delta",
            value: delta,
            reason: "observation step must be positive",
        });
    }
    Ok(())
}

/// Mean auxiliary statistics over simulated Vasicek series sharing the
/// common random numbers in `crn`, one series per block.
fn vasicek_sim_aux_mean(
    a: f64,
    b: f64,
    sigma: f64,
    r0: f64,
    delta: f64,
    crn: &[Vec<f64>],
    series: &mut Vec<f64>,
) -> Result<[f64; 3]> {
    // exact transition coefficients, hoisted out of the step loop
    let beta = (-a * delta).exp();
    let alpha = b * (1.0 - beta);
    let s1 = sigma * ((1.0 - beta * beta) / (2.0 * a)).sqrt();
    let mut acc = [0.0; 3];
    for eps in crn {
        series.clear();
        series.push(r0);
        let mut x = r0;
        for &e in eps {
            x = alpha + beta * x + s1 * e;
            series.push(x);
        }
        let aux = vasicek_aux(series)?;
        for (sum, v) in acc.iter_mut().zip(aux) {
            *sum += v;
        }
    }
    for sum in &mut acc {
        *sum /= crn.len() as f64;
    }
    Ok(acc)
}

/// Simulate a square-root path with Milstein substeps and keep every
/// `substeps`-th node, so the returned series lives on the observation
/// grid. `eps` supplies n_obs * substeps normals.
fn cir_simulate_observed(
    p: &CirParams,
    delta: f64,
    substeps: usize,
    eps: &[f64],
    out: &mut Vec<f64>,
) -> Result<()> {
    let fine = delta / substeps as f64;
    out.clear();
    out.push(p.r0);
    let mut x = p.r0;
    for chunk in eps.chunks_exact(substeps) {
        for &e in chunk {
            x = milstein_step(p, x, 0.0, fine, e)?;
        }
        out.push(x);
    }
    Ok(())
}

fn cir_sim_aux_mean(
    p: &CirParams,
    delta: f64,
    crn: &[Vec<f64>],
    series: &mut Vec<f64>,
) -> Result<[f64; 3]> {
    let mut acc = [0.0; 3];
    for eps in crn {
        cir_simulate_observed(p, delta, CIR_SIM_SUBSTEPS, eps, series)?;
        let aux = cir_aux(series, delta)?;
        for (sum, v) in acc.iter_mut().zip(aux) {
            *sum += v;
        }
    }
    for sum in &mut acc {
        *sum /= crn.len() as f64;
    }
    Ok(acc)
}

fn squared_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indirect inference for short-rate models: pick the parameters whose
/// simulated series, refitted with the same auxiliary estimator as the
/// data, reproduce the data's auxiliary statistics.
///
/// `sim_multiplier` series of the observed length are simulated per
/// candidate, all driven by common random numbers drawn once from `seed`,
/// so the objective is deterministic and smooth in the parameters. The
/// Vasicek simulator uses the exact transition; the square-root simulator
/// steps a Milstein scheme on a grid 8 times finer than the observations.
pub fn fit_indirect(
    observations: &[f64],
    delta: f64,
    model: ShortRateModel,
    aux: AuxScheme,
    sim_multiplier: usize,
    seed: u64,
) -> Result<FitReport> {
    if observations.len() < 100 {
        return Err(Error::SampleTooSmall {
            need: 100,
            got: observations.len(),
        });
    }
    check_delta(delta)?;
    if sim_multiplier == 0 {
        return Err(Error::OutOfDomain {
            name: "sim_multiplier",
            value: 0.0,
            reason: "need at least one simulated series",
        });
    }
    // for the Ornstein-Uhlenbeck diffusion the Milstein correction
    // vanishes, so both schemes induce the same auxiliary regression; the
    // square-root pseudo-MLE is only worked out for the Euler scheme
    if model == ShortRateModel::Cir && aux == AuxScheme::Milstein {
        return Err(Error::UnsupportedAuxiliary);
    }
    let r0 = observations[0];

    let n_steps = observations.len() - 1;
    let per_block = match model {
        ShortRateModel::Vasicek => n_steps,
        ShortRateModel::Cir => n_steps * CIR_SIM_SUBSTEPS,
    };
    let master = NormalSource::standard(Lcg::minstd(seed)?);
    let mut crn: Vec<Vec<f64>> = Vec::with_capacity(sim_multiplier);
    for block in 0..sim_multiplier {
        let mut stream = master.derive(block as u64, per_block as u64)?;
        crn.push(stream.take_normals(per_block)?);
    }

    let mut series: Vec<f64> = Vec::with_capacity(observations.len());
    let (outcome, bounds) = match model {
        ShortRateModel::Vasicek => {
            let psi_obs = vasicek_aux(observations)?;
            let bounds = [A_BOUNDS, B_BOUNDS, SIGMA_BOUNDS];
            let fit = fit_ar1(observations)?;
            let a_naive = (1.0 - fit.beta_hat) / delta;
            let b_naive = fit.alpha_hat / (1.0 - fit.beta_hat);
            let start = [
                bounds[0].to_free(a_naive),
                bounds[1].to_free(b_naive.max(0.01)),
                bounds[2].to_free(fit.sigma1_hat / delta.sqrt()),
            ];
            let mut f = |free: &[f64]| -> Result<f64> {
                let sim = vasicek_sim_aux_mean(
                    bounds[0].from_free(free[0]),
                    bounds[1].from_free(free[1]),
                    bounds[2].from_free(free[2]),
                    r0,
                    delta,
                    &crn,
                    &mut series,
                )?;
                Ok(squared_distance(&sim, &psi_obs))
            };
            let opts = SimplexOptions {
                f_tol: 1e-12,
                x_tol: 1e-8,
                max_iters: 600,
            };
            (nelder_mead(&mut f, &start, &opts)?, bounds)
        }
        ShortRateModel::Cir => {
            let psi_obs = cir_aux(observations, delta)?;
            let bounds = [A_BOUNDS, CIR_B_BOUNDS, CIR_SIGMA_BOUNDS];
            let start = [
                bounds[0].to_free(psi_obs[0].clamp(0.01, 4.9)),
                bounds[1].to_free(psi_obs[1].clamp(0.005, 0.24)),
                bounds[2].to_free(psi_obs[2].clamp(0.005, 0.49)),
            ];
            let mut f = |free: &[f64]| -> Result<f64> {
                let p = CirParams::new(
                    bounds[0].from_free(free[0]),
                    bounds[1].from_free(free[1]),
                    r0,
                    bounds[2].from_free(free[2]),
                )?;
                let sim = cir_sim_aux_mean(&p, delta, &crn, &mut series)?;
                Ok(squared_distance(&sim, &psi_obs))
            };
            // the substepped objective is costlier per evaluation and its
            // simplex collapses in value well before it does in position,
            // so convergence is judged on the objective spread alone
            let opts = SimplexOptions {
                f_tol: 1e-12,
                x_tol: f64::INFINITY,
                max_iters: 600,
            };
            (nelder_mead(&mut f, &start, &opts)?, bounds)
        }
    };

    let report = FitReport {
        method: Method::Indirect,
        a: bounds[0].from_free(outcome.x[0]),
        b: bounds[1].from_free(outcome.x[1]),
        sigma: bounds[2].from_free(outcome.x[2]),
        r0,
        objective_value: outcome.value,
        iterations: outcome.iterations,
        fixed_sigma: None,
    };
    if !outcome.converged {
        return Err(Error::OptimFailed {
            iterations: outcome.iterations,
            best: Box::new(report),
        });
    }
    Ok(report)
}
