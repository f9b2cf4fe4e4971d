use crate::args::{SchemeArg, SourceArgs};
use crate::errors::{CliError, Result};
use crate::io::{fmt17, write_file, write_json};
use clap::{Args, Subcommand, ValueEnum};
use diffusim::sde::{
    measure_strong_order, simulate_ensemble_par, CirParams, GbmParams, PathEnsemble, SdeModel,
    VasicekParams,
};
use diffusim::transforms::NormalSource;
use std::path::PathBuf;

#[derive(Debug, Subcommand)]
pub enum SdeCmd {
    /// Simulate a path ensemble and write it as CSV
    Simulate(SimulateArgs),
    /// Measure the strong convergence order of a scheme
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Vasicek,
    Cir,
    Gbm,
}

/// Model parameters under the shared flag names: for the short-rate models
/// --a/--b are mean reversion and long-run level; for gbm --a is the drift
/// rate, --r0 the initial price and --b meaningless.
#[derive(Debug, Args)]
pub struct ModelParams {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Mean-reversion speed (vasicek, cir) or drift rate (gbm)
    #[arg(long)]
    a: f64,
    /// Long-run level (vasicek, cir only)
    #[arg(long)]
    b: Option<f64>,
    /// Initial value: rate for the short-rate models, price for gbm
    #[arg(long)]
    r0: f64,
    /// Volatility
    #[arg(long)]
    sigma: f64,
}

impl ModelParams {
    fn build(&self) -> Result<Box<dyn SdeModel + Sync>> {
        match self.model {
            ModelArg::Vasicek => {
                let b = self.require_b()?;
                Ok(Box::new(VasicekParams::new(self.a, b, self.r0, self.sigma)?))
            }
            ModelArg::Cir => {
                let b = self.require_b()?;
                Ok(Box::new(CirParams::new(self.a, b, self.r0, self.sigma)?))
            }
            ModelArg::Gbm => {
                if self.b.is_some() {
                    return Err(CliError::Invalid(
                        "--b does not apply to gbm (drift is --a, initial price --r0)".into(),
                    ));
                }
                Ok(Box::new(GbmParams::new(self.r0, self.a, self.sigma)?))
            }
        }
    }

    fn require_b(&self) -> Result<f64> {
        self.b.ok_or_else(|| {
            CliError::Invalid("--b is required for the short-rate models".into())
        })
    }

    fn name(&self) -> &'static str {
        match self.model {
            ModelArg::Vasicek => "vasicek",
            ModelArg::Cir => "cir",
            ModelArg::Gbm => "gbm",
        }
    }

    fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "model": self.name(),
            "a": self.a,
            "b": self.b,
            "r0": self.r0,
            "sigma": self.sigma,
        })
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    params: ModelParams,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Time step in years
    #[arg(long)]
    delta: f64,
    /// Horizon in years
    #[arg(short = 'T', long = "horizon")]
    horizon: f64,
    /// Number of trajectories
    #[arg(short = 'n', long = "paths")]
    paths: usize,
    #[command(flatten)]
    source: SourceArgs,
    /// Output CSV path (header: t, path_0, ..., path_{n-1})
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    params: ModelParams,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Comma-separated step sizes, strictly decreasing, nested on the finest
    #[arg(long, value_delimiter = ',', required = true)]
    deltas: Vec<f64>,
    /// Horizon in years
    #[arg(short = 'T', long = "horizon", default_value_t = 1.0)]
    horizon: f64,
    /// Number of coupled paths
    #[arg(short = 'n', long = "paths", default_value_t = 10_000)]
    paths: usize,
    #[command(flatten)]
    source: SourceArgs,
    /// Output JSON path for the convergence report
    #[arg(long)]
    out: PathBuf,
    /// Optional log-log CSV (columns: delta, mean_abs_error, ln_delta, ln_error)
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

pub fn run(cmd: SdeCmd) -> Result<()> {
    match cmd {
        SdeCmd::Simulate(a) => simulate(a),
        SdeCmd::Convergence(a) => convergence(a),
    }
}

pub fn ensemble_csv(ensemble: &PathEnsemble) -> String {
    let mut text = String::new();
    text.push('t');
    for p in 0..ensemble.n_paths() {
        text.push_str(&format!(",path_{p}"));
    }
    text.push('\n');
    let times = ensemble.times();
    for (k, t) in times.iter().enumerate() {
        text.push_str(&fmt17(*t));
        for p in 0..ensemble.n_paths() {
            text.push(',');
            text.push_str(&fmt17(ensemble.path(p)[k]));
        }
        text.push('\n');
    }
    text
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let model = a.params.build()?;
    let steps = (a.horizon / a.delta).round().max(1.0) as u64;
    let source = a.source.build(2 * a.paths as u64 * steps)?;
    let normals = NormalSource::standard(source);
    let ensemble = simulate_ensemble_par(
        model.as_ref(),
        a.scheme.to_scheme(),
        a.delta,
        a.horizon,
        a.paths,
        &normals,
    )?;
    write_file(&a.out, &ensemble_csv(&ensemble))
}

fn convergence(a: ConvergenceArgs) -> Result<()> {
    let model = a.params.build()?;
    let fine_steps = a
        .deltas
        .last()
        .map(|d| (a.horizon / d).round().max(1.0) as u64)
        .unwrap_or(1);
    let source = a.source.build(2 * a.paths as u64 * fine_steps)?;
    let normals = NormalSource::standard(source);
    let report = measure_strong_order(
        model.as_ref(),
        a.scheme.to_scheme(),
        &a.deltas,
        a.paths,
        a.horizon,
        &normals,
    )?;

    let json = serde_json::json!({
        "config_echo": {
            "command": "sde convergence",
            "scheme": a.scheme.name(),
            "deltas": a.deltas,
            "horizon": a.horizon,
            "paths": a.paths,
            "model": a.params.echo(),
            "source": a.source.echo(),
        },
        "report": report,
    });
    write_json(&a.out, &json)?;

    if let Some(csv_path) = &a.csv_out {
        let mut text = String::from("delta,mean_abs_error,ln_delta,ln_error\n");
        for (d, e) in report.deltas.iter().zip(&report.mean_abs_terminal_errors) {
            text.push_str(&format!(
                "{},{},{},{}\n",
                fmt17(*d),
                fmt17(*e),
                fmt17(d.ln()),
                fmt17(e.ln())
            ));
        }
        write_file(csv_path, &text)?;
    }
    Ok(())
}
