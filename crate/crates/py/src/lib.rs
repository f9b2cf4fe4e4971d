//! Python bindings for the simulation toolkit.
//!
//! Reports come back as plain dicts with the same shape as the CLI's JSON
//! output; sources are stateful objects that advance as they are consumed,
//! except where the underlying engine reads them immutably (`simulate`,
//! `strong_order`), which is noted on the function.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use diffusim::calibration::{
    AdhocObjective, AuxScheme, FitReport, FixedParams, ShortRateModel, ZeroCouponCurve,
};
use diffusim::pricing::CallSpec;
use diffusim::rng::{AnySource, Lcg, MixedTorus, Torus, UniformSource};
use diffusim::sde::{CirParams, GbmParams, PathEnsemble, Scheme, SdeModel, VasicekParams};
use diffusim::transforms::{NormalMethod, NormalSource};

fn domain(e: diffusim::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn invalid(msg: impl Into<String>) -> PyErr {
    PyValueError::new_err(msg.into())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        serde_json::Value::Null => py.None().into_bound(py),
        serde_json::Value::Bool(b) => b.into_bound_py_any(py)?,
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_bound_py_any(py)?
            } else if let Some(u) = n.as_u64() {
                u.into_bound_py_any(py)?
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py)?
            }
        }
        serde_json::Value::String(s) => s.into_bound_py_any(py)?,
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialize_to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| invalid(e.to_string()))?;
    json_to_py(py, &value)
}

fn fit_to_py<'py>(py: Python<'py>, fit: &FitReport) -> PyResult<Bound<'py, PyAny>> {
    serialize_to_py(py, fit)
}

fn parse_method(method: &str) -> PyResult<NormalMethod> {
    match method {
        "moro" => Ok(NormalMethod::MoroInverse),
        "box-muller" | "box_muller" => Ok(NormalMethod::BoxMuller),
        other => Err(invalid(format!(
            "unknown normal method '{other}' (expected 'moro' or 'box-muller')"
        ))),
    }
}

fn parse_scheme(scheme: &str) -> PyResult<Scheme> {
    match scheme {
        "exact" => Ok(Scheme::Exact),
        "euler" => Ok(Scheme::Euler),
        "milstein" => Ok(Scheme::Milstein),
        other => Err(invalid(format!(
            "unknown scheme '{other}' (expected 'exact', 'euler' or 'milstein')"
        ))),
    }
}

fn build_model(
    model: &str,
    a: f64,
    b: Option<f64>,
    r0: f64,
    sigma: f64,
) -> PyResult<Box<dyn SdeModel + Sync>> {
    let require_b = || b.ok_or_else(|| invalid(format!("model '{model}' needs b")));
    match model {
        "vasicek" => Ok(Box::new(
            VasicekParams::new(a, require_b()?, r0, sigma).map_err(domain)?,
        )),
        "cir" => Ok(Box::new(
            CirParams::new(a, require_b()?, r0, sigma).map_err(domain)?,
        )),
        "gbm" => {
            if b.is_some() {
                return Err(invalid("b does not apply to gbm (drift is a, initial price r0)"));
            }
            Ok(Box::new(GbmParams::new(r0, a, sigma).map_err(domain)?))
        }
        other => Err(invalid(format!(
            "unknown model '{other}' (expected 'vasicek', 'cir' or 'gbm')"
        ))),
    }
}

/// A deterministic uniform source on (0, 1). Consuming methods advance it.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Source {
    inner: AnySource,
}

#[pymethods]
impl Source {
    /// Lewis-Goodman-Miller congruential generator.
    #[staticmethod]
    #[pyo3(signature = (seed = 1))]
    fn lcg(seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: AnySource::Lcg(Lcg::minstd(seed).map_err(domain)?),
        })
    }

    /// Additive torus on sqrt(prime): quasi-random, no seed.
    #[staticmethod]
    fn torus(prime: u64) -> PyResult<Self> {
        Ok(Self {
            inner: AnySource::Torus(Torus::new(prime).map_err(domain)?),
        })
    }

    /// Torus with congruentially shuffled indices; `capacity` caps the
    /// draws the permutation covers.
    #[staticmethod]
    #[pyo3(signature = (prime, capacity, seed = 1))]
    fn mixed(prime: u64, capacity: u64, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: AnySource::Mixed(MixedTorus::new(prime, capacity, seed).map_err(domain)?),
        })
    }

    /// Torus mixed by another torus instead of a congruential generator.
    #[staticmethod]
    fn mixed_by_torus(prime: u64, capacity: u64, alpha: f64, mixer_prime: u64) -> PyResult<Self> {
        let mixer = Torus::new(mixer_prime).map_err(domain)?;
        Ok(Self {
            inner: AnySource::MixedByTorus(
                MixedTorus::with_mixer(prime, capacity, alpha, mixer).map_err(domain)?,
            ),
        })
    }

    fn take(&mut self, n: usize) -> PyResult<Vec<f64>> {
        self.inner.take(n).map_err(domain)
    }

    fn skip(&mut self, n: u64) -> PyResult<()> {
        self.inner.skip(n).map_err(domain)
    }

    /// Standard normals from the stream. Each call restarts Box-Muller
    /// pairing, so a call consumes exactly the uniforms its normals need.
    #[pyo3(signature = (n, method = "moro"))]
    fn take_normals(&mut self, n: usize, method: &str) -> PyResult<Vec<f64>> {
        let m = parse_method(method)?;
        let mut normals = NormalSource::new(self.inner.clone(), m);
        let out = normals.take_normals(n).map_err(domain)?;
        self.inner.skip(m.uniforms_needed(n as u64)).map_err(domain)?;
        Ok(out)
    }

    /// Poisson counts by inversion of the running CDF.
    fn poisson(&mut self, lam: f64, n: usize) -> PyResult<Vec<u64>> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(diffusim::transforms::poisson_sample(lam, &mut self.inner).map_err(domain)?);
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        match &self.inner {
            AnySource::Lcg(_) => "Source.lcg(...)".into(),
            AnySource::Torus(_) => "Source.torus(...)".into(),
            AnySource::Mixed(_) => "Source.mixed(...)".into(),
            AnySource::MixedByTorus(_) => "Source.mixed_by_torus(...)".into(),
        }
    }
}

/// A simulated trajectory ensemble on a regular time grid.
#[pyclass]
struct Ensemble {
    inner: PathEnsemble,
}

#[pymethods]
impl Ensemble {
    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta()
    }

    #[getter]
    fn n_paths(&self) -> usize {
        self.inner.n_paths()
    }

    #[getter]
    fn n_steps(&self) -> usize {
        self.inner.n_steps()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.times()
    }

    fn mean_path(&self) -> Vec<f64> {
        self.inner.mean_path()
    }

    fn path(&self, p: usize) -> PyResult<Vec<f64>> {
        if p >= self.inner.n_paths() {
            return Err(invalid(format!(
                "path index {p} out of range for {} paths",
                self.inner.n_paths()
            )));
        }
        Ok(self.inner.path(p).to_vec())
    }

    fn terminal(&self) -> Vec<f64> {
        self.inner.terminal()
    }

    /// Compound each rate path into a capitalization-bond path from `bc0`.
    fn capitalization_bond(&self, bc0: f64) -> PyResult<Ensemble> {
        Ok(Ensemble {
            inner: diffusim::sde::capitalization_bond(&self.inner, bc0).map_err(domain)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Ensemble(n_paths={}, n_steps={}, delta={})",
            self.inner.n_paths(),
            self.inner.n_steps(),
            self.inner.delta()
        )
    }
}

#[pyfunction]
fn moro_inverse_normal(u: f64) -> PyResult<f64> {
    diffusim::transforms::moro_inverse_normal(u).map_err(domain)
}

#[pyfunction]
fn box_muller(u1: f64, u2: f64) -> PyResult<(f64, f64)> {
    diffusim::transforms::box_muller(u1, u2).map_err(domain)
}

#[pyfunction]
#[pyo3(signature = (sample, bins = 20, alpha = 0.05))]
fn chi_square_uniform<'py>(
    py: Python<'py>,
    sample: Vec<f64>,
    bins: usize,
    alpha: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = diffusim::stats::chi_square_uniform(&sample, bins, alpha).map_err(domain)?;
    serialize_to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (sample, alpha = 0.05))]
fn ks_uniform<'py>(py: Python<'py>, sample: Vec<f64>, alpha: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = diffusim::stats::ks_test(&sample, |x| x, alpha).map_err(domain)?;
    serialize_to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (sample, alpha = 0.05))]
fn anderson_darling_uniform<'py>(
    py: Python<'py>,
    sample: Vec<f64>,
    alpha: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = diffusim::stats::anderson_darling_test(&sample, |x| x, alpha).map_err(domain)?;
    serialize_to_py(py, &report)
}

/// Poker test on digit hands; returns the report dict with the observed
/// counts and frequencies attached.
#[pyfunction]
#[pyo3(signature = (sample, alpha = 0.05))]
fn poker<'py>(py: Python<'py>, sample: Vec<f64>, alpha: f64) -> PyResult<Bound<'py, PyAny>> {
    let (freq, report) = diffusim::stats::poker_test(&sample, alpha).map_err(domain)?;
    let out = serialize_to_py(py, &report)?;
    let dict = out.cast::<PyDict>().map_err(PyErr::from)?;
    dict.set_item("hands", freq.hands)?;
    dict.set_item("counts", freq.counts.to_vec())?;
    dict.set_item("frequencies", freq.frequencies.to_vec())?;
    dict.set_item("labels", diffusim::stats::POKER_LABELS.to_vec())?;
    Ok(out)
}

#[pyfunction]
fn correlogram(seq: Vec<f64>, max_lag: usize) -> PyResult<Vec<f64>> {
    diffusim::stats::correlogram(&seq, max_lag).map_err(domain)
}

#[pyfunction]
fn bs_call_price(s: f64, k: f64, r: f64, sigma: f64, tau: f64) -> PyResult<f64> {
    let spec = CallSpec::expiring_in(s, k, r, sigma, tau).map_err(domain)?;
    Ok(diffusim::pricing::bs_call_price(&spec))
}

/// Monte-Carlo call price; advances `source` by the uniforms consumed.
/// Returns (estimate, report) where the report carries the closed-form
/// reference and the running estimates and relative errors.
#[pyfunction]
fn mc_call_price<'py>(
    py: Python<'py>,
    s: f64,
    k: f64,
    r: f64,
    sigma: f64,
    tau: f64,
    n: usize,
    source: &mut Source,
) -> PyResult<(f64, Bound<'py, PyAny>)> {
    let spec = CallSpec::expiring_in(s, k, r, sigma, tau).map_err(domain)?;
    let mut normals = NormalSource::standard(source.inner.clone());
    let (estimate, report) = diffusim::pricing::mc_call_price(&spec, n, &mut normals).map_err(domain)?;
    source.inner.skip(n as u64).map_err(domain)?;

    let dict = PyDict::new(py);
    dict.set_item("reference", report.reference)?;
    dict.set_item("n_sims", report.n_sims)?;
    dict.set_item("estimates", report.estimates)?;
    dict.set_item("relative_errors", report.relative_errors)?;
    Ok((estimate, dict.into_any()))
}

/// Simulate an ensemble of trajectories. The source is read from its
/// current position and not advanced, matching the engine's contract that
/// repeated runs from one source state are identical.
#[pyfunction]
#[pyo3(signature = (model, scheme, delta, horizon, n_paths, source, *, a, r0, sigma, b = None, method = "moro"))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    model: &str,
    scheme: &str,
    delta: f64,
    horizon: f64,
    n_paths: usize,
    source: &Source,
    a: f64,
    r0: f64,
    sigma: f64,
    b: Option<f64>,
    method: &str,
) -> PyResult<Ensemble> {
    let m = build_model(model, a, b, r0, sigma)?;
    let normals = NormalSource::new(source.inner.clone(), parse_method(method)?);
    let inner = diffusim::sde::simulate_ensemble_par(
        m.as_ref(),
        parse_scheme(scheme)?,
        delta,
        horizon,
        n_paths,
        &normals,
    )
    .map_err(domain)?;
    Ok(Ensemble { inner })
}

/// Measure the strong convergence order of a scheme against the exact
/// transition. The source is read from its current position and not
/// advanced.
#[pyfunction]
#[pyo3(signature = (model, scheme, deltas, n_paths, horizon, source, *, a, r0, sigma, b = None))]
#[allow(clippy::too_many_arguments)]
fn strong_order<'py>(
    py: Python<'py>,
    model: &str,
    scheme: &str,
    deltas: Vec<f64>,
    n_paths: usize,
    horizon: f64,
    source: &Source,
    a: f64,
    r0: f64,
    sigma: f64,
    b: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let m = build_model(model, a, b, r0, sigma)?;
    let normals = NormalSource::standard(source.inner.clone());
    let report = diffusim::sde::measure_strong_order(
        m.as_ref(),
        parse_scheme(scheme)?,
        &deltas,
        n_paths,
        horizon,
        &normals,
    )
    .map_err(domain)?;

    let dict = PyDict::new(py);
    dict.set_item("deltas", report.deltas)?;
    dict.set_item("mean_abs_terminal_errors", report.mean_abs_terminal_errors)?;
    dict.set_item("fitted_order", report.fitted_order)?;
    dict.set_item("constant", report.constant)?;
    dict.set_item("degenerate", report.degenerate)?;
    Ok(dict.into_any())
}

/// Exact-discretization maximum likelihood for the mean-reverting
/// Gaussian short rate, via its AR(1) representation.
#[pyfunction]
fn fit_mle<'py>(py: Python<'py>, series: Vec<f64>, delta: f64) -> PyResult<Bound<'py, PyAny>> {
    let fit = diffusim::calibration::fit_mle_exact(&series, delta).map_err(domain)?;
    fit_to_py(py, &fit)
}

/// Least-squares fit of (a, b, sigma) to a zero-coupon curve given as
/// parallel maturity and rate lists; pass `a`, `b` or `sigma` to pin them.
#[pyfunction]
#[pyo3(signature = (maturities, rates, *, objective = "prices", a = None, b = None, sigma = None, r0 = None))]
fn fit_adhoc<'py>(
    py: Python<'py>,
    maturities: Vec<f64>,
    rates: Vec<f64>,
    objective: &str,
    a: Option<f64>,
    b: Option<f64>,
    sigma: Option<f64>,
    r0: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    if maturities.len() != rates.len() {
        return Err(invalid(format!(
            "maturities and rates must have equal length (got {} and {})",
            maturities.len(),
            rates.len()
        )));
    }
    let pairs: Vec<(f64, f64)> = maturities.into_iter().zip(rates).collect();
    let curve = ZeroCouponCurve::from_pairs(&pairs).map_err(domain)?;
    let objective = match objective {
        "prices" => AdhocObjective::Prices,
        "rates" => AdhocObjective::Rates,
        other => {
            return Err(invalid(format!(
                "unknown objective '{other}' (expected 'prices' or 'rates')"
            )))
        }
    };
    let fixed = FixedParams { a, b, sigma };
    let fit = diffusim::calibration::fit_adhoc(&curve, objective, fixed, r0).map_err(domain)?;
    fit_to_py(py, &fit)
}

fn parse_short_rate_model(model: &str) -> PyResult<ShortRateModel> {
    match model {
        "vasicek" => Ok(ShortRateModel::Vasicek),
        "cir" => Ok(ShortRateModel::Cir),
        other => Err(invalid(format!(
            "unknown model '{other}' (expected 'vasicek' or 'cir')"
        ))),
    }
}

/// Indirect inference on an observed rate series: match the auxiliary
/// discrete-scheme estimates between data and simulation.
#[pyfunction]
#[pyo3(signature = (series, delta, *, model = "vasicek", aux = "euler", sim_multiplier = 10, seed = 1))]
fn fit_indirect<'py>(
    py: Python<'py>,
    series: Vec<f64>,
    delta: f64,
    model: &str,
    aux: &str,
    sim_multiplier: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let aux = match aux {
        "euler" => AuxScheme::Euler,
        "milstein" => AuxScheme::Milstein,
        other => {
            return Err(invalid(format!(
                "unknown auxiliary scheme '{other}' (expected 'euler' or 'milstein')"
            )))
        }
    };
    let fit = diffusim::calibration::fit_indirect(
        &series,
        delta,
        parse_short_rate_model(model)?,
        aux,
        sim_multiplier,
        seed,
    )
    .map_err(domain)?;
    fit_to_py(py, &fit)
}

/// The biased plug-in estimate an Euler regression gives on discrete data.
#[pyfunction]
fn naive_euler_estimate(series: Vec<f64>, delta: f64, model: &str) -> PyResult<(f64, f64, f64)> {
    diffusim::calibration::naive_euler_estimate(&series, delta, parse_short_rate_model(model)?)
        .map_err(domain)
}

/// Model-implied continuously compounded zero rate at maturity `t`.
#[pyfunction]
fn vasicek_zc_rate(a: f64, b: f64, r0: f64, sigma: f64, t: f64) -> PyResult<f64> {
    let p = VasicekParams::new(a, b, r0, sigma).map_err(domain)?;
    diffusim::calibration::vasicek_zc_rate(&p, t).map_err(domain)
}

/// Model-implied zero-coupon bond price at maturity `t`.
#[pyfunction]
fn vasicek_zc_price(a: f64, b: f64, r0: f64, sigma: f64, t: f64) -> PyResult<f64> {
    let p = VasicekParams::new(a, b, r0, sigma).map_err(domain)?;
    diffusim::calibration::vasicek_zc_price(&p, t).map_err(domain)
}

#[pymodule]
fn diffusim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Source>()?;
    m.add_class::<Ensemble>()?;
    m.add_function(wrap_pyfunction!(moro_inverse_normal, m)?)?;
    m.add_function(wrap_pyfunction!(box_muller, m)?)?;
    m.add_function(wrap_pyfunction!(chi_square_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(ks_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(anderson_darling_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(poker, m)?)?;
    m.add_function(wrap_pyfunction!(correlogram, m)?)?;
    m.add_function(wrap_pyfunction!(bs_call_price, m)?)?;
    m.add_function(wrap_pyfunction!(mc_call_price, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(strong_order, m)?)?;
    m.add_function(wrap_pyfunction!(fit_mle, m)?)?;
    m.add_function(wrap_pyfunction!(fit_adhoc, m)?)?;
    m.add_function(wrap_pyfunction!(fit_indirect, m)?)?;
    m.add_function(wrap_pyfunction!(naive_euler_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(vasicek_zc_rate, m)?)?;
    m.add_function(wrap_pyfunction!(vasicek_zc_price, m)?)?;
    Ok(())
}
