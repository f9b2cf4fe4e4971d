use super::{step, Scheme, SdeModel};
use crate::error::{Error, Result};
use crate::rng::UniformSource;
use crate::transforms::NormalSource;
use rayon::prelude::*;

/// `n_paths` trajectories on the uniform grid t_k = k*delta, k = 0..=n_steps.
///
/// Time is stored as a step index plus `delta`, never as an accumulated
/// float, so grid timestamps are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    delta: f64,
    n_paths: usize,
    n_steps: usize,
    /// Row-major: path p occupies values[p*(n_steps+1) .. (p+1)*(n_steps+1)].
    values: Vec<f64>,
}

impl PathEnsemble {
    fn new(delta: f64, n_paths: usize, n_steps: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), n_paths * (n_steps + 1));
        Self {
            delta,
            n_paths,
            n_steps,
            values,
        }
    }

    /// Build an ensemble from explicit rows; every row is one path and all
    /// rows must share the same positive length.
    pub fn from_rows(delta: f64, rows: Vec<Vec<f64>>) -> Result<Self> {
        super::check_step(delta)?;
        let n_paths = rows.len();
        if n_paths == 0 || rows[0].is_empty() {
            return Err(Error::SampleTooSmall { need: 1, got: 0 });
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::CategoryLengthMismatch {
                observed: rows.iter().map(Vec::len).max().unwrap(),
                probs: width,
            });
        }
        let values = rows.into_iter().flatten().collect();
        Ok(Self::new(delta, n_paths, width - 1, values))
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    /// Steps per path; each path holds n_steps + 1 states.
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn horizon(&self) -> f64 {
        self.n_steps as f64 * self.delta
    }

    /// Grid times t_k = k * delta.
    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|k| k as f64 * self.delta).collect()
    }

    pub fn path(&self, p: usize) -> &[f64] {
        let w = self.n_steps + 1;
        &self.values[p * w..(p + 1) * w]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_steps + 1)
    }

    /// Cross-sectional average at every grid time.
    pub fn mean_path(&self) -> Vec<f64> {
        let w = self.n_steps + 1;
        let mut mean = vec![0.0; w];
        for path in self.paths() {
            for (m, x) in mean.iter_mut().zip(path) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= self.n_paths as f64;
        }
        mean
    }

    /// Terminal state of every path.
    pub fn terminal(&self) -> Vec<f64> {
        self.paths().map(|p| p[self.n_steps]).collect()
    }
}

/// Number of steps on the grid, rejecting horizons that do not land on it.
pub(super) fn grid_steps(delta: f64, horizon: f64) -> Result<usize> {
    super::check_step(delta)?;
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::OutOfDomain {
            name: "horizon",
            value: horizon,
            reason: "horizon must be positive and finite",
        });
    }
    let ratio = horizon / delta;
    let steps = ratio.round();
    if steps < 1.0 || (ratio - steps).abs() > 1e-9 * steps {
        return Err(Error::GridMismatch { horizon, delta });
    }
    Ok(steps as usize)
}

fn check_ensemble_args<M: SdeModel + ?Sized>(
    model: &M,
    scheme: Scheme,
    delta: f64,
    horizon: f64,
    n_paths: usize,
) -> Result<usize> {
    let n_steps = grid_steps(delta, horizon)?;
    if n_paths == 0 {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    if scheme == Scheme::Exact && model.exact_step(model.initial(), delta, 0.0).is_none() {
        return Err(Error::ExactStepUnavailable(model.name()));
    }
    Ok(n_steps)
}

fn one_path<M, S>(
    model: &M,
    scheme: Scheme,
    delta: f64,
    n_steps: usize,
    normals: &mut NormalSource<S>,
) -> Result<Vec<f64>>
where
    M: SdeModel + ?Sized,
    S: UniformSource,
{
    let mut row = Vec::with_capacity(n_steps + 1);
    let mut x = model.initial();
    row.push(x);
    for k in 0..n_steps {
        let eps = normals.next_normal()?;
        x = step(model, scheme, x, k as f64 * delta, delta, eps)?;
        row.push(x);
    }
    Ok(row)
}

/// Simulate `n_paths` trajectories of `model` under `scheme` on the grid
/// t_k = k*delta up to `horizon`.
///
/// Normal draws are consumed in trajectory-major order: path p uses the
/// block of draws `normals.derive(p, n_steps)` would produce, so the result
/// depends only on the master source's initial state and the path index.
/// The master source itself is never advanced; to continue drawing after
/// the ensemble, derive block `n_paths`.
pub fn simulate_ensemble<M, S>(
    model: &M,
    scheme: Scheme,
    delta: f64,
    horizon: f64,
    n_paths: usize,
    normals: &NormalSource<S>,
) -> Result<PathEnsemble>
where
    M: SdeModel + ?Sized,
    S: UniformSource + Clone,
{
    let n_steps = check_ensemble_args(model, scheme, delta, horizon, n_paths)?;
    let mut values = Vec::with_capacity(n_paths * (n_steps + 1));
    for p in 0..n_paths {
        let mut stream = normals.derive(p as u64, n_steps as u64)?;
        values.extend(one_path(model, scheme, delta, n_steps, &mut stream)?);
    }
    Ok(PathEnsemble::new(delta, n_paths, n_steps, values))
}

/// [`simulate_ensemble`] with trajectories running in parallel.
///
/// Per-trajectory stream derivation makes the result bit-identical to the
/// sequential version regardless of thread count.
pub fn simulate_ensemble_par<M, S>(
    model: &M,
    scheme: Scheme,
    delta: f64,
    horizon: f64,
    n_paths: usize,
    normals: &NormalSource<S>,
) -> Result<PathEnsemble>
where
    M: SdeModel + Sync + ?Sized,
    S: UniformSource + Clone + Send + Sync,
{
    let n_steps = check_ensemble_args(model, scheme, delta, horizon, n_paths)?;
    let rows: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut stream = normals.derive(p as u64, n_steps as u64)?;
            one_path(model, scheme, delta, n_steps, &mut stream)
        })
        .collect::<Result<_>>()?;
    let values = rows.into_iter().flatten().collect();
    Ok(PathEnsemble::new(delta, n_paths, n_steps, values))
}

/// Capitalization bond driven by a rate ensemble: BC_{k+1} = BC_k e^{delta r_k},
/// accruing each step at the rate seen at the step's left endpoint.
pub fn capitalization_bond(rates: &PathEnsemble, bc0: f64) -> Result<PathEnsemble> {
    if !bc0.is_finite() || bc0 <= 0.0 {
        return Err(Error::OutOfDomain {
            name: "bc0",
            value: bc0,
            reason: "initial bond value must be positive and finite",
        });
    }
    let w = rates.n_steps + 1;
    let mut values = Vec::with_capacity(rates.n_paths * w);
    for path in rates.paths() {
        let mut bc = bc0;
        values.push(bc);
        for &r in &path[..rates.n_steps] {
            bc *= (rates.delta * r).exp();
            values.push(bc);
        }
    }
    Ok(PathEnsemble::new(
        rates.delta,
        rates.n_paths,
        rates.n_steps,
        values,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::{CirParams, VasicekParams};
    use super::*;
    use crate::rng::{Lcg, Torus};
    use crate::transforms::NormalMethod;

    fn vasicek(sigma: f64) -> VasicekParams {
        VasicekParams::new(0.5, 0.05, 0.04, sigma).unwrap()
    }

    fn minstd_normals(seed: u64) -> NormalSource<Lcg> {
        NormalSource::standard(Lcg::minstd(seed).unwrap())
    }

    #[test]
    fn zero_volatility_exact_path_is_the_deterministic_curve() {
        let m = vasicek(0.0);
        let ens =
            simulate_ensemble(&m, Scheme::Exact, 0.25, 10.0, 1, &minstd_normals(1)).unwrap();
        for (t, x) in ens.times().iter().zip(ens.path(0)) {
            let want = m.mean_at(*t);
            assert!((x - want).abs() < 1e-12, "t = {t}: {x} vs {want}");
        }
    }

    #[test]
    fn mean_terminal_rate_matches_the_closed_form() {
        let m = vasicek(0.1);
        let ens =
            simulate_ensemble(&m, Scheme::Exact, 0.5, 10.0, 10_000, &minstd_normals(2)).unwrap();
        let mean = ens.terminal().iter().sum::<f64>() / 10_000.0;
        // E r_10 = 0.05 - 0.01 e^{-5}; terminal sd ~ 0.1, so SE ~ 0.001
        let want = 0.05 - 0.01 * (-5.0f64).exp();
        assert!((want - 0.049933).abs() < 1e-6);
        assert!((mean - want).abs() < 0.003, "mean {mean} vs {want}");
    }

    #[test]
    fn euler_bias_on_the_mean_shrinks_with_the_step() {
        let m = VasicekParams::new(0.5, 0.05, 0.0, 0.1).unwrap();
        let normals = minstd_normals(3);
        let gap = |delta: f64| {
            let exact =
                simulate_ensemble(&m, Scheme::Exact, delta, 5.0, 20_000, &normals).unwrap();
            let euler =
                simulate_ensemble(&m, Scheme::Euler, delta, 5.0, 20_000, &normals).unwrap();
            let me = exact.terminal().iter().sum::<f64>() / 20_000.0;
            let mu = euler.terminal().iter().sum::<f64>() / 20_000.0;
            (me - mu).abs()
        };
        let coarse = gap(0.5);
        let fine = gap(0.125);
        assert!(coarse > fine, "coarse {coarse} vs fine {fine}");
        assert!((5e-4..2.5e-3).contains(&coarse), "coarse gap {coarse}");
        assert!(fine < 1e-3, "fine gap {fine}");
    }

    #[test]
    fn parallel_matches_sequential_bit_for_bit() {
        let m = vasicek(0.1);
        // odd step count and Box-Muller pairing: the worst case for any
        // stream-splitting mistake
        let normals = NormalSource::new(Lcg::minstd(4).unwrap(), NormalMethod::BoxMuller);
        let seq = simulate_ensemble(&m, Scheme::Exact, 1.0, 5.0, 37, &normals).unwrap();
        let par = simulate_ensemble_par(&m, Scheme::Exact, 1.0, 5.0, 37, &normals).unwrap();
        assert_eq!(seq, par);

        let quasi = NormalSource::standard(Torus::new(2).unwrap());
        let seq = simulate_ensemble(&m, Scheme::Euler, 0.5, 4.0, 64, &quasi).unwrap();
        let par = simulate_ensemble_par(&m, Scheme::Euler, 0.5, 4.0, 64, &quasi).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn master_source_is_left_untouched() {
        let m = vasicek(0.1);
        let normals = minstd_normals(5);
        let a = simulate_ensemble(&m, Scheme::Exact, 1.0, 5.0, 3, &normals).unwrap();
        let b = simulate_ensemble(&m, Scheme::Exact, 1.0, 5.0, 3, &normals).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_and_argument_validation() {
        let m = vasicek(0.1);
        let normals = minstd_normals(6);
        assert!(matches!(
            simulate_ensemble(&m, Scheme::Exact, 0.3, 1.0, 1, &normals),
            Err(Error::GridMismatch { .. })
        ));
        assert!(simulate_ensemble(&m, Scheme::Exact, 0.5, 1.0, 0, &normals).is_err());
        let cir = CirParams::new(0.5, 0.05, 0.04, 0.1).unwrap();
        assert!(matches!(
            simulate_ensemble(&cir, Scheme::Exact, 0.5, 1.0, 10, &normals),
            Err(Error::ExactStepUnavailable("cir"))
        ));
    }

    #[test]
    fn ensemble_geometry() {
        let m = vasicek(0.1);
        let ens =
            simulate_ensemble(&m, Scheme::Exact, 0.25, 2.0, 5, &minstd_normals(7)).unwrap();
        assert_eq!(ens.n_paths(), 5);
        assert_eq!(ens.n_steps(), 8);
        assert_eq!(ens.path(4).len(), 9);
        assert_eq!(ens.times()[8], 2.0);
        assert!((ens.horizon() - 2.0).abs() < 1e-15);
        for p in ens.paths() {
            assert_eq!(p[0], 0.04);
        }
        assert_eq!(ens.mean_path()[0], 0.04);
    }

    #[test]
    fn bond_accrues_at_the_left_endpoint() {
        let rates = PathEnsemble::from_rows(1.0, vec![vec![0.04, 0.04, 0.04]]).unwrap();
        let bc = capitalization_bond(&rates, 1.0).unwrap();
        assert!((bc.path(0)[2] - (0.08f64).exp()).abs() < 1e-15);
        // the rate at the final node is never used
        let rates = PathEnsemble::from_rows(1.0, vec![vec![0.04, 0.04, 99.0]]).unwrap();
        let bc2 = capitalization_bond(&rates, 1.0).unwrap();
        assert_eq!(bc.path(0), bc2.path(0));

        let zero = PathEnsemble::from_rows(1.0, vec![vec![0.0; 4]]).unwrap();
        let bc = capitalization_bond(&zero, 2.5).unwrap();
        assert!(bc.path(0).iter().all(|&v| v == 2.5));
    }

    #[test]
    fn bond_gap_between_exact_and_euler_rates_is_negligible() {
        let m = vasicek(0.1);
        let normals = minstd_normals(8);
        let delta = 1.0 / 12.0;
        let exact =
            simulate_ensemble(&m, Scheme::Exact, delta, 10.0, 2_000, &normals).unwrap();
        let euler =
            simulate_ensemble(&m, Scheme::Euler, delta, 10.0, 2_000, &normals).unwrap();
        let bc_e = capitalization_bond(&exact, 100.0).unwrap();
        let bc_u = capitalization_bond(&euler, 100.0).unwrap();
        let me = bc_e.terminal().iter().sum::<f64>() / 2_000.0;
        let mu = bc_u.terminal().iter().sum::<f64>() / 2_000.0;
        assert!(((me - mu) / me).abs() < 0.005, "{me} vs {mu}");
    }

    #[test]
    fn from_rows_validation() {
        assert!(PathEnsemble::from_rows(1.0, vec![]).is_err());
        assert!(PathEnsemble::from_rows(1.0, vec![vec![]]).is_err());
        assert!(PathEnsemble::from_rows(1.0, vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(PathEnsemble::from_rows(0.0, vec![vec![1.0]]).is_err());
    }
}
