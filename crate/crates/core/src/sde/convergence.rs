use super::engine::grid_steps;
use super::{step, Scheme, SdeModel};
use crate::error::{Error, Result};
use crate::rng::UniformSource;
use crate::transforms::NormalSource;

/// Strong-convergence measurement: mean terminal error per step size and
/// the fitted power law E|error| ~ constant * delta^order.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergenceReport {
    /// Step sizes, strictly decreasing.
    pub deltas: Vec<f64>,
    /// E|X_T(scheme, delta) - X_T(exact)| per delta, same order.
    pub mean_abs_terminal_errors: Vec<f64>,
    /// Least-squares slope of ln(error) on ln(delta); `None` when the
    /// errors sit at machine precision and a fit would be meaningless.
    pub fitted_order: Option<f64>,
    /// exp(intercept) of the same fit.
    pub constant: Option<f64>,
    /// True when some mean error is zero to machine precision, e.g. for a
    /// deterministic model where the scheme integrates the drift exactly.
    pub degenerate: bool,
}

/// Measure the strong convergence order of `scheme` on `model`.
///
/// Brownian increments are generated on the finest grid and summed into
/// coarse increments, so every step size sees the same underlying path;
/// the reference X_T is the exact transition composed along the finest
/// grid. Every delta must be an integer multiple of the smallest one and
/// divide the horizon.
pub fn measure_strong_order<M, S>(
    model: &M,
    scheme: Scheme,
    deltas: &[f64],
    n_paths: usize,
    horizon: f64,
    normals: &NormalSource<S>,
) -> Result<ConvergenceReport>
where
    M: SdeModel + ?Sized,
    S: UniformSource + Clone,
{
    if deltas.len() < 3 {
        return Err(Error::TooFewDeltas {
            need: 3,
            got: deltas.len(),
        });
    }
    if deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::OutOfDomain {
            name: "deltas",
            value: f64::NAN,
            reason: "step sizes must be strictly decreasing",
        });
    }
    if n_paths == 0 {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    if model.exact_step(model.initial(), *deltas.last().unwrap(), 0.0).is_none() {
        return Err(Error::ExactStepUnavailable(model.name()));
    }

    let finest = *deltas.last().unwrap();
    let fine_steps = grid_steps(finest, horizon)?;
    // fine steps per coarse step, one entry per delta
    let mut multiples = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        grid_steps(delta, horizon)?;
        let ratio = delta / finest;
        let m = ratio.round();
        if (ratio - m).abs() > 1e-9 * m {
            return Err(Error::DeltasNotNested { delta, finest });
        }
        multiples.push(m as usize);
    }

    let mut error_sums = vec![0.0; deltas.len()];
    let mut eps = vec![0.0; fine_steps];
    for p in 0..n_paths {
        let mut stream = normals.derive(p as u64, fine_steps as u64)?;
        for e in &mut eps {
            *e = stream.next_normal()?;
        }

        let mut exact = model.initial();
        for &e in &eps {
            exact = model
                .exact_step(exact, finest, e)
                .ok_or(Error::ExactStepUnavailable(model.name()))?;
        }

        for (i, (&delta, &m)) in deltas.iter().zip(&multiples).enumerate() {
            let mut x = model.initial();
            for (k, chunk) in eps.chunks_exact(m).enumerate() {
                // sum of m unit normals, rescaled back to unit variance
                let agg = chunk.iter().sum::<f64>() / (m as f64).sqrt();
                x = step(model, scheme, x, k as f64 * delta, delta, agg)?;
            }
            error_sums[i] += (x - exact).abs();
        }
    }

    let errors: Vec<f64> = error_sums.iter().map(|s| s / n_paths as f64).collect();
    let floor = 1e-11 * (1.0 + model.initial().abs());
    let degenerate = errors.iter().any(|&e| e < floor);
    let (fitted_order, constant) = if degenerate {
        (None, None)
    } else {
        let (slope, intercept) = log_log_fit(deltas, &errors);
        (Some(slope), Some(intercept.exp()))
    };
    Ok(ConvergenceReport {
        deltas: deltas.to_vec(),
        mean_abs_terminal_errors: errors,
        fitted_order,
        constant,
        degenerate,
    })
}

fn log_log_fit(deltas: &[f64], errors: &[f64]) -> (f64, f64) {
    let n = deltas.len() as f64;
    let xs: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
