use crate::errors::{CliError, Result};
use crate::io::{read_curve, read_series, write_json};
use clap::{Args, Subcommand, ValueEnum};
use diffusim::calibration::{
    fit_adhoc, fit_indirect, fit_mle_exact, AdhocObjective, AuxScheme, FitReport, FixedParams,
    ShortRateModel,
};
use std::path::PathBuf;

#[derive(Debug, Subcommand)]
pub enum CalibCmd {
    /// Least-squares fit of the Vasicek curve to an observed zero-coupon curve
    Adhoc(AdhocArgs),
    /// Indirect inference on a rate series through a discretized auxiliary model
    Indirect(IndirectArgs),
    /// Exact-discretization maximum likelihood on a rate series
    Mle(MleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Prices,
    Rates,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct AdhocArgs {
    /// Curve CSV (header: maturity_years,zero_rate; decimal rates)
    #[arg(long)]
    curve: PathBuf,
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Pin a parameter, e.g. --fix sigma=0.05 (repeatable; a, b or sigma)
    #[arg(long, value_name = "NAME=VALUE")]
    fix: Vec<String>,
    /// Override the short rate (default: shortest-tenor curve rate)
    #[arg(long)]
    r0: Option<f64>,
    /// Output JSON path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Vasicek,
    Cir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AuxArg {
    Euler,
    Milstein,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct IndirectArgs {
    /// Rate series file, one decimal value per line
    #[arg(long)]
    series: PathBuf,
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Auxiliary discretization scheme
    #[arg(long, value_enum, default_value_t = AuxArg::Euler)]
    aux: AuxArg,
    /// Simulated series per objective evaluation
    #[arg(long = "H", default_value_t = 10)]
    sim_multiplier: usize,
    /// Observation spacing in years
    #[arg(long)]
    delta: f64,
    /// Seed for the simulated auxiliary estimates
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output JSON path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MleArgs {
    /// Rate series file, one decimal value per line
    #[arg(long)]
    series: PathBuf,
    /// Observation spacing in years
    #[arg(long)]
    delta: f64,
    /// Output JSON path
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cmd: CalibCmd) -> Result<()> {
    match cmd {
        CalibCmd::Adhoc(a) => adhoc(a),
        CalibCmd::Indirect(a) => indirect(a),
        CalibCmd::Mle(a) => mle(a),
    }
}

fn parse_fixed(fix: &[String]) -> Result<FixedParams> {
    let mut fixed = FixedParams::default();
    for item in fix {
        let (name, value) = item.split_once('=').ok_or_else(|| {
            CliError::Invalid(format!("--fix expects NAME=VALUE, found '{item}'"))
        })?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("--fix {name}: bad value '{value}'")))?;
        let slot = match name.trim() {
            "a" => &mut fixed.a,
            "b" => &mut fixed.b,
            "sigma" => &mut fixed.sigma,
            other => {
                return Err(CliError::Invalid(format!(
                    "--fix accepts a, b or sigma, found '{other}'"
                )))
            }
        };
        if slot.replace(value).is_some() {
            return Err(CliError::Invalid(format!("--fix {name} given twice")));
        }
    }
    Ok(fixed)
}

fn report_json(report: &FitReport, config_echo: serde_json::Value) -> serde_json::Value {
    let mut json = serde_json::to_value(report).expect("fit report serialization");
    json["config_echo"] = config_echo;
    json
}

fn adhoc(a: AdhocArgs) -> Result<()> {
    let curve = read_curve(&a.curve)?;
    let fixed = parse_fixed(&a.fix)?;
    let objective = match a.objective {
        ObjectiveArg::Prices => AdhocObjective::Prices,
        ObjectiveArg::Rates => AdhocObjective::Rates,
    };
    let report = fit_adhoc(&curve, objective, fixed, a.r0)?;
    let echo = serde_json::json!({
        "command": "calib adhoc",
        "curve": a.curve.display().to_string(),
        "objective": objective.to_string(),
        "fix": a.fix,
        "r0": a.r0,
    });
    write_json(&a.out, &report_json(&report, echo))
}

fn indirect(a: IndirectArgs) -> Result<()> {
    let series = read_series(&a.series)?;
    let model = match a.model {
        ModelArg::Vasicek => ShortRateModel::Vasicek,
        ModelArg::Cir => ShortRateModel::Cir,
    };
    let aux = match a.aux {
        AuxArg::Euler => AuxScheme::Euler,
        AuxArg::Milstein => AuxScheme::Milstein,
    };
    let report = fit_indirect(&series, a.delta, model, aux, a.sim_multiplier, a.seed)?;
    let echo = serde_json::json!({
        "command": "calib indirect",
        "series": a.series.display().to_string(),
        "model": model.to_string(),
        "aux": aux.to_string(),
        "H": a.sim_multiplier,
        "delta": a.delta,
        "seed": a.seed,
    });
    write_json(&a.out, &report_json(&report, echo))
}

fn mle(a: MleArgs) -> Result<()> {
    let series = read_series(&a.series)?;
    let report = fit_mle_exact(&series, a.delta)?;
    let echo = serde_json::json!({
        "command": "calib mle",
        "series": a.series.display().to_string(),
        "delta": a.delta,
    });
    write_json(&a.out, &report_json(&report, echo))
}
