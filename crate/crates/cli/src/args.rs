use crate::errors::Result;
use clap::{Args, ValueEnum};
use diffusim::rng::{AnySource, Lcg, MixedTorus, Torus};
use diffusim::sde::Scheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceKind {
    Lcg,
    Torus,
    Mixed,
}

/// Uniform-source selection shared by every randomized subcommand.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Uniform source driving the run
    #[arg(long, value_enum, default_value_t = SourceKind::Lcg)]
    pub source: SourceKind,
    /// Torus prime (torus and mixed sources)
    #[arg(long, default_value_t = 2)]
    pub prime: u64,
    /// Congruential seed (lcg source and the mixed source's mixer)
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl SourceArgs {
    /// Build the source; `declared_draws` sizes the mixed torus's address
    /// space and is ignored by the other kinds.
    pub fn build(&self, declared_draws: u64) -> Result<AnySource> {
        Ok(match self.source {
            SourceKind::Lcg => AnySource::Lcg(Lcg::minstd(self.seed)?),
            SourceKind::Torus => AnySource::Torus(Torus::new(self.prime)?),
            SourceKind::Mixed => AnySource::Mixed(MixedTorus::new(
                self.prime,
                declared_draws.max(1),
                self.seed,
            )?),
        })
    }

    pub fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "source": match self.source {
                SourceKind::Lcg => "lcg",
                SourceKind::Torus => "torus",
                SourceKind::Mixed => "mixed",
            },
            "prime": self.prime,
            "seed": self.seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Exact,
    Euler,
    Milstein,
}

impl SchemeArg {
    pub fn to_scheme(self) -> Scheme {
        match self {
            SchemeArg::Exact => Scheme::Exact,
            SchemeArg::Euler => Scheme::Euler,
            SchemeArg::Milstein => Scheme::Milstein,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeArg::Exact => "exact",
            SchemeArg::Euler => "euler",
            SchemeArg::Milstein => "milstein",
        }
    }
}
