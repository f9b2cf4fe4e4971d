//! Derivative-free simplex descent and the bound transform it searches
//! under. Parameters live in an open box; the optimizer works in an
//! unconstrained space mapped through a logistic, so every probe is
//! feasible by construction.

use crate::error::{Error, Result};

/// An open interval a parameter is confined to.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    /// Map an unconstrained coordinate into the interval.
    pub fn from_free(self, z: f64) -> f64 {
        // numerically stable logistic
        let s = if z >= 0.0 {
            1.0 / (1.0 + (-z).exp())
        } else {
            let e = z.exp();
            e / (1.0 + e)
        };
        self.lo + (self.hi - self.lo) * s
    }

    /// Inverse map; values at or outside the bounds are pulled just inside.
    pub fn to_free(self, x: f64) -> f64 {
        let p = ((x - self.lo) / (self.hi - self.lo)).clamp(1e-12, 1.0 - 1e-12);
        (p / (1.0 - p)).ln()
    }
}

/// Search box used by every fitting routine: Table-style magnitudes with
/// room to spare, and beta = e^{-a delta} stays inside (0,1).
pub(crate) const A_BOUNDS: Bounds = Bounds { lo: 1e-4, hi: 5.0 };
pub(crate) const B_BOUNDS: Bounds = Bounds { lo: -0.05, hi: 0.25 };
pub(crate) const SIGMA_BOUNDS: Bounds = Bounds { lo: 0.0, hi: 0.5 };

pub(crate) struct SimplexOptions {
    /// Stop when the objective spread across the simplex falls below this...
    pub f_tol: f64,
    /// ...and every vertex is within this of the best one.
    pub x_tol: f64,
    pub max_iters: u64,
}

pub(crate) struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: u64,
    pub converged: bool,
}

fn eval(f: &mut impl FnMut(&[f64]) -> Result<f64>, x: &[f64]) -> Result<f64> {
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteObjective(x.to_vec()))
    }
}

/// Nelder-Mead with standard coefficients (reflect 1, expand 2, contract
/// 1/2, shrink 1/2). The initial simplex offsets each coordinate by
/// 0.25|x| + 0.25 (0.5 at zero).
pub(crate) fn nelder_mead(
    f: &mut impl FnMut(&[f64]) -> Result<f64>,
    start: &[f64],
    opts: &SimplexOptions,
) -> Result<SimplexOutcome> {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += if p[i] == 0.0 { 0.5 } else { 0.25 * p[i].abs() + 0.25 };
        simplex.push(p);
    }
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    for p in &simplex {
        values.push(eval(f, p)?);
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let width = simplex
            .iter()
            .flat_map(|s| s.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread < opts.f_tol && width < opts.x_tol {
            converged = true;
            break;
        }

        // centroid of all but the worst vertex
        let mut c = vec![0.0; n];
        for s in &simplex[..n] {
            for (ci, si) in c.iter_mut().zip(s) {
                *ci += si;
            }
        }
        for ci in &mut c {
            *ci /= n as f64;
        }

        let worst = simplex[n].clone();
        let reflect: Vec<f64> = c.iter().zip(&worst).map(|(c, w)| 2.0 * c - w).collect();
        let f_reflect = eval(f, &reflect)?;
        iterations += 1;

        if f_reflect < values[0] {
            let expand: Vec<f64> = c.iter().zip(&worst).map(|(c, w)| 3.0 * c - 2.0 * w).collect();
            let f_expand = eval(f, &expand)?;
            if f_expand < f_reflect {
                simplex[n] = expand;
                values[n] = f_expand;
            } else {
                simplex[n] = reflect;
                values[n] = f_reflect;
            }
        } else if f_reflect < values[n - 1] {
            simplex[n] = reflect;
            values[n] = f_reflect;
        } else {
            let contract: Vec<f64> = c.iter().zip(&worst).map(|(c, w)| c + 0.5 * (w - c)).collect();
            let f_contract = eval(f, &contract)?;
            if f_contract < values[n] {
                simplex[n] = contract;
                values[n] = f_contract;
            } else {
                for i in 1..=n {
                    let shrunk: Vec<f64> = simplex[i]
                        .iter()
                        .zip(&simplex[0])
                        .map(|(s, b)| b + 0.5 * (s - b))
                        .collect();
                    values[i] = eval(f, &shrunk)?;
                    simplex[i] = shrunk;
                }
            }
        }
    }

    let best = (0..=n)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .unwrap();
    Ok(SimplexOutcome {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    })
}
