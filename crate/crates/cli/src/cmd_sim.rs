//! Named figure and table recipes: each subcommand reruns one published
//! experiment with its stated parameters and writes plot-ready CSV.

use crate::errors::Result;
use crate::io::{fmt17, write_file};
use clap::{Args, Subcommand};
use diffusim::pricing::{mc_call_price, CallSpec};
use diffusim::rng::{Lcg, MixedTorus, Torus, UniformSource};
use diffusim::sde::{
    capitalization_bond, simulate_ensemble_par, GbmParams, Scheme, VasicekParams,
};
use diffusim::stats::{correlogram, poker_test, poker_theoretical_probs, POKER_LABELS};
use diffusim::transforms::NormalSource;
use std::path::PathBuf;

#[derive(Debug, Subcommand)]
pub enum SimCmd {
    /// Mean Vasicek rate path per discretization scheme
    Figure1(RecipeArgs),
    /// Mean capitalization-bond path per discretization scheme
    Figure2(RecipeArgs),
    /// Running call-price error, congruential vs torus source
    Figure7(SeedArgs),
    /// Mean GBM path from the raw torus vs the theoretical mean
    Figure8(OutArg),
    /// Correlogram of the raw torus (p = 5)
    Figure9(LagArgs),
    /// Correlogram of the torus (p = 5) mixed by another torus (p = 19)
    Figure10(LagArgs),
    /// Correlogram of the torus (p = 5) mixed by the congruential generator
    Figure11(LagSeedArgs),
    /// Mean GBM path from the mixed torus vs the theoretical mean
    Figure12(SeedArgs),
    /// Poker test of the raw torus across primes
    Table2(OutArg),
    /// Poker test of the torus mixed by the congruential generator
    Table3(SeedArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Congruential seed where the recipe draws pseudo-random numbers
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RecipeArgs {
    /// Time step in years
    #[arg(long, default_value_t = 1.0 / 12.0)]
    delta: f64,
    /// Congruential seed driving the trajectories
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LagArgs {
    /// Deepest correlogram lag
    #[arg(long, default_value_t = 50)]
    max_lag: usize,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LagSeedArgs {
    /// Deepest correlogram lag
    #[arg(long, default_value_t = 50)]
    max_lag: usize,
    /// Congruential seed for the mixer
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cmd: SimCmd) -> Result<()> {
    match cmd {
        SimCmd::Figure1(a) => vasicek_schemes(a, Quantity::Rate),
        SimCmd::Figure2(a) => vasicek_schemes(a, Quantity::Bond),
        SimCmd::Figure7(a) => pricing_error(a),
        SimCmd::Figure8(a) => gbm_mean_path(&a.out, GbmSource::RawTorus),
        SimCmd::Figure9(a) => correlogram_csv(&a.out, a.max_lag, Torus::new(5)?),
        SimCmd::Figure10(a) => correlogram_csv(
            &a.out,
            a.max_lag,
            MixedTorus::with_mixer(5, 10_000, 10.0, Torus::new(19)?)?,
        ),
        SimCmd::Figure11(a) => correlogram_csv(
            &a.out,
            a.max_lag,
            MixedTorus::new(5, 10_000, a.seed)?,
        ),
        SimCmd::Figure12(a) => gbm_mean_path(&a.out, GbmSource::Mixed { seed: a.seed }),
        SimCmd::Table2(a) => torus_poker_table(&a.out),
        SimCmd::Table3(a) => mixed_poker_table(a),
    }
}

enum Quantity {
    Rate,
    Bond,
}

/// Fig. 1 and Fig. 2 protocol: 10 000 Vasicek trajectories
/// (a = 0.5, b = 0.05, r0 = 0.04, sigma = 0.1) over 10 years, every scheme
/// driven by the same normal draws.
fn vasicek_schemes(a: RecipeArgs, quantity: Quantity) -> Result<()> {
    let params = VasicekParams::new(0.5, 0.05, 0.04, 0.1)?;
    let normals = NormalSource::standard(Lcg::minstd(a.seed)?);
    let mut columns = Vec::new();
    let mut times = Vec::new();
    for scheme in [Scheme::Exact, Scheme::Euler, Scheme::Milstein] {
        let rates =
            simulate_ensemble_par(&params, scheme, a.delta, 10.0, 10_000, &normals)?;
        let ensemble = match quantity {
            Quantity::Rate => rates,
            Quantity::Bond => capitalization_bond(&rates, 1.0)?,
        };
        times = ensemble.times();
        columns.push(ensemble.mean_path());
    }

    let mut text = String::from("t,exact,euler,milstein\n");
    for (k, t) in times.iter().enumerate() {
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt17(*t),
            fmt17(columns[0][k]),
            fmt17(columns[1][k]),
            fmt17(columns[2][k])
        ));
    }
    write_file(&a.out, &text)
}

/// Fig. 7 protocol: at-the-money call (S = K = 100, r = 4%, sigma = 20%,
/// six months), running relative error for the congruential and torus
/// sources on the same simulation grid.
fn pricing_error(a: SeedArgs) -> Result<()> {
    let spec = CallSpec::expiring_in(100.0, 100.0, 0.04, 0.2, 0.5)?;
    let mut lcg = NormalSource::standard(Lcg::minstd(a.seed)?);
    let (_, by_lcg) = mc_call_price(&spec, 10_000, &mut lcg)?;
    let mut torus = NormalSource::standard(Torus::new(2)?);
    let (_, by_torus) = mc_call_price(&spec, 10_000, &mut torus)?;

    let mut text = String::from("n,estimate_lcg,rho_lcg,estimate_torus,rho_torus\n");
    for (i, n) in by_lcg.n_sims.iter().enumerate() {
        text.push_str(&format!(
            "{n},{},{},{},{}\n",
            fmt17(by_lcg.estimates[i]),
            fmt17(by_lcg.relative_errors[i]),
            fmt17(by_torus.estimates[i]),
            fmt17(by_torus.relative_errors[i])
        ));
    }
    write_file(&a.out, &text)
}

enum GbmSource {
    RawTorus,
    Mixed { seed: u64 },
}

/// Fig. 8 and Fig. 12 protocol: 10 000 GBM trajectories (S0 = 100,
/// r = 4%, sigma = 20%), annual steps over 20 years, mean path against
/// S0 e^{rt}.
fn gbm_mean_path(out: &PathBuf, source: GbmSource) -> Result<()> {
    let gbm = GbmParams::new(100.0, 0.04, 0.2)?;
    let mean = match source {
        GbmSource::RawTorus => {
            let normals = NormalSource::standard(Torus::new(2)?);
            simulate_ensemble_par(&gbm, Scheme::Exact, 1.0, 20.0, 10_000, &normals)?
                .mean_path()
        }
        GbmSource::Mixed { seed } => {
            let normals =
                NormalSource::standard(MixedTorus::new(2, 200_000, seed)?);
            simulate_ensemble_par(&gbm, Scheme::Exact, 1.0, 20.0, 10_000, &normals)?
                .mean_path()
        }
    };

    let mut text = String::from("t,mean_simulated,mean_theoretical\n");
    for (k, m) in mean.iter().enumerate() {
        let t = k as f64;
        text.push_str(&format!(
            "{},{},{}\n",
            fmt17(t),
            fmt17(*m),
            fmt17(100.0 * (0.04 * t).exp())
        ));
    }
    write_file(out, &text)
}

fn correlogram_csv(out: &PathBuf, max_lag: usize, mut source: impl UniformSource) -> Result<()> {
    let seq = source.take(10_000)?;
    let rho = correlogram(&seq, max_lag)?;
    let mut text = String::from("h,rho\n");
    for (h, r) in rho.iter().enumerate() {
        text.push_str(&format!("{},{}\n", h + 1, fmt17(*r)));
    }
    write_file(out, &text)
}

/// Table 2 protocol: poker categories over 4 000 torus draws per prime,
/// with the chi-square p-value as the last row.
fn torus_poker_table(out: &PathBuf) -> Result<()> {
    const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let mut frequency_rows = vec![Vec::new(); 5];
    let mut p_values = Vec::new();
    for p in PRIMES {
        let mut torus = Torus::new(p)?;
        let draws = torus.take(4_000)?;
        let (freq, report) = poker_test(&draws, 0.05)?;
        for (row, f) in frequency_rows.iter_mut().zip(freq.frequencies) {
            row.push(f);
        }
        p_values.push(report.p_value);
    }

    let mut text = String::from("category,theoretical");
    for p in PRIMES {
        text.push_str(&format!(",p_{p}"));
    }
    text.push('\n');
    let theory = poker_theoretical_probs();
    for (k, label) in POKER_LABELS.iter().enumerate() {
        text.push_str(&format!("{label},{}", fmt17(theory[k])));
        for f in &frequency_rows[k] {
            text.push(',');
            text.push_str(&fmt17(*f));
        }
        text.push('\n');
    }
    text.push_str(&format!("chi2_p_value,{}", fmt17(1.0)));
    for p in &p_values {
        text.push(',');
        text.push_str(&fmt17(*p));
    }
    text.push('\n');
    write_file(out, &text)
}

/// Table 3 protocol: poker categories over 40 000 draws of the torus mixed
/// by the congruential generator.
fn mixed_poker_table(a: SeedArgs) -> Result<()> {
    let mut mixed = MixedTorus::new(2, 40_000, a.seed)?;
    let draws = mixed.take(40_000)?;
    let (freq, report) = poker_test(&draws, 0.05)?;

    let mut text = String::from("category,theoretical,observed\n");
    let theory = poker_theoretical_probs();
    for (k, label) in POKER_LABELS.iter().enumerate() {
        text.push_str(&format!(
            "{label},{},{}\n",
            fmt17(theory[k]),
            fmt17(freq.frequencies[k])
        ));
    }
    text.push_str(&format!(
        "chi2_p_value,{},{}\n",
        fmt17(1.0),
        fmt17(report.p_value)
    ));
    write_file(&a.out, &text)
}
