use crate::args::SourceArgs;
use crate::errors::Result;
use crate::io::{fmt17, write_file};
use clap::{Args, Subcommand};
use diffusim::pricing::{mc_call_price, CallSpec};
use diffusim::transforms::NormalSource;
use std::path::PathBuf;

#[derive(Debug, Subcommand)]
pub enum PriceCmd {
    /// Monte-Carlo European call price with running error vs the closed form
    Call(CallArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CallArgs {
    /// Spot price
    #[arg(long)]
    s: f64,
    /// Strike
    #[arg(long)]
    k: f64,
    /// Risk-free rate, continuous
    #[arg(long)]
    r: f64,
    /// Volatility
    #[arg(long)]
    sigma: f64,
    /// Time to expiry in years
    #[arg(long)]
    tau: f64,
    /// Number of simulations
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    source: SourceArgs,
    /// Output CSV path (columns: n, estimate, rho)
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cmd: PriceCmd) -> Result<()> {
    match cmd {
        PriceCmd::Call(a) => call(a),
    }
}

fn call(a: CallArgs) -> Result<()> {
    let spec = CallSpec::expiring_in(a.s, a.k, a.r, a.sigma, a.tau)?;
    let source = a.source.build(a.n as u64)?;
    let mut normals = NormalSource::standard(source);
    let (_, report) = mc_call_price(&spec, a.n, &mut normals)?;

    let mut text = String::from("n,estimate,rho\n");
    for ((n, est), rho) in report
        .n_sims
        .iter()
        .zip(&report.estimates)
        .zip(&report.relative_errors)
    {
        text.push_str(&format!("{n},{},{}\n", fmt17(*est), fmt17(*rho)));
    }
    write_file(&a.out, &text)
}
