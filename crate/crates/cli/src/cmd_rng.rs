use crate::args::SourceArgs;
use crate::errors::Result;
use crate::io::{fmt17, write_file, write_json};
use clap::{Args, Subcommand, ValueEnum};
use diffusim::rng::UniformSource;
use diffusim::stats::{
    anderson_darling_test, chi_square_uniform, correlogram, ks_test, poker_test, TestReport,
};
use diffusim::transforms::{NormalMethod, NormalSource};
use std::path::PathBuf;

#[derive(Debug, Subcommand)]
pub enum RngCmd {
    /// Emit raw uniforms, one value per line
    Gen(GenArgs),
    /// Emit transformed draws (normal or Poisson), one value per line
    Transform(TransformArgs),
    /// Run the statistical battery and write a JSON report
    Test(TestArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of draws
    #[arg(long)]
    count: u64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dist {
    Normal,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Moro,
    BoxMuller,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TransformArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Target distribution
    #[arg(long, value_enum)]
    dist: Dist,
    /// Poisson intensity (poisson only)
    #[arg(long, required_if_eq("dist", "poisson"))]
    lambda: Option<f64>,
    /// Uniform-to-normal method (normal only)
    #[arg(long, value_enum, default_value_t = MethodArg::Moro)]
    method: MethodArg,
    /// Number of draws
    #[arg(long)]
    count: u64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
enum Battery {
    Chi2,
    Ks,
    Ad,
    Poker,
    Correlogram,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of draws the battery examines
    #[arg(long, default_value_t = 10_000)]
    count: u64,
    /// Comma-separated test list
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "chi2,ks,ad,poker,correlogram"
    )]
    battery: Vec<Battery>,
    /// Bins for the chi-square test
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Rejection level shared by all tests
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Deepest correlogram lag
    #[arg(long, default_value_t = 50)]
    max_lag: usize,
    /// Output JSON path
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cmd: RngCmd) -> Result<()> {
    match cmd {
        RngCmd::Gen(a) => gen(a),
        RngCmd::Transform(a) => transform(a),
        RngCmd::Test(a) => test(a),
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let mut source = a.source.build(a.count)?;
    let draws = source.take(a.count as usize)?;
    let mut text = String::with_capacity(draws.len() * 24);
    for v in draws {
        text.push_str(&fmt17(v));
        text.push('\n');
    }
    write_file(&a.out, &text)
}

fn transform(a: TransformArgs) -> Result<()> {
    let mut source = a.source.build(transform_budget(&a))?;
    let mut text = String::new();
    match a.dist {
        Dist::Normal => {
            let method = match a.method {
                MethodArg::Moro => NormalMethod::MoroInverse,
                MethodArg::BoxMuller => NormalMethod::BoxMuller,
            };
            let mut normals = NormalSource::new(source, method);
            for _ in 0..a.count {
                text.push_str(&fmt17(normals.next_normal()?));
                text.push('\n');
            }
        }
        Dist::Poisson => {
            let lambda = a.lambda.expect("clap enforces --lambda for poisson");
            for _ in 0..a.count {
                let n = diffusim::transforms::poisson_sample(lambda, &mut source)?;
                text.push_str(&n.to_string());
                text.push('\n');
            }
        }
    }
    write_file(&a.out, &text)
}

/// Uniforms a transform run may consume, sizing the mixed torus address
/// space: normals need at most 2 per draw, Poisson about lambda + 2 each.
fn transform_budget(a: &TransformArgs) -> u64 {
    match a.dist {
        Dist::Normal => 2 * a.count,
        Dist::Poisson => {
            let per_draw = a.lambda.unwrap_or(1.0).max(0.0) + 2.0;
            (a.count as f64 * per_draw * 4.0).ceil() as u64
        }
    }
}

fn test(a: TestArgs) -> Result<()> {
    let mut source = a.source.build(a.count)?;
    let sample = source.take(a.count as usize)?;
    let uniform_cdf = |x: f64| x;

    let mut tests: Vec<TestReport> = Vec::new();
    let mut correlogram_section = None;
    for battery in &a.battery {
        match battery {
            Battery::Chi2 => tests.push(chi_square_uniform(&sample, a.bins, a.alpha)?),
            Battery::Ks => tests.push(ks_test(&sample, uniform_cdf, a.alpha)?),
            Battery::Ad => tests.push(anderson_darling_test(&sample, uniform_cdf, a.alpha)?),
            Battery::Poker => {
                let (_, report) = poker_test(&sample, a.alpha)?;
                tests.push(report);
            }
            Battery::Correlogram => {
                let rho = correlogram(&sample, a.max_lag)?;
                let max_abs = rho.iter().fold(0.0f64, |m, r| m.max(r.abs()));
                correlogram_section = Some(serde_json::json!({
                    "max_lag": a.max_lag,
                    "rho": rho,
                    "max_abs_rho": max_abs,
                }));
            }
        }
    }

    let mut report = serde_json::json!({
        "config_echo": {
            "command": "rng test",
            "count": a.count,
            "battery": a.battery.iter().map(|b| format!("{b:?}").to_lowercase()).collect::<Vec<_>>(),
            "bins": a.bins,
            "alpha": a.alpha,
            "max_lag": a.max_lag,
            "source": a.source.echo(),
        },
        "tests": tests,
    });
    if let Some(c) = correlogram_section {
        report["correlogram"] = c;
    }
    write_json(&a.out, &report)
}
