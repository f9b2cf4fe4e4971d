//! Uniform random and quasi-random sources.
//!
//! Three generators with one shared contract:
//!
//! | source       | character                 | serial correlation       |
//! |--------------|---------------------------|--------------------------|
//! | [`Lcg`]      | pseudo-random             | negligible               |
//! | [`Torus`]    | quasi-random, u_n = {n*sqrt(p)} | strong, structural |
//! | [`MixedTorus`] | torus shuffled by a mixer | broken by the mixer    |
//!
//! Every emitted value lies in [0, 1), never exactly 0 (a value that rounds
//! to 0 is remapped to the source's smallest positive draw so that ln(u)
//! downstream is always finite). Sources are cheap to clone and can jump
//! ahead in O(log n), which is what the trajectory-major stream derivation
//! in the path engine builds on.

mod lcg;
mod mixed;
mod torus;

pub use lcg::Lcg;
pub use mixed::MixedTorus;
pub use torus::{Torus, TORUS_INDEX_LIMIT};

use crate::error::Result;

/// A sequential source of uniforms on [0, 1).
pub trait UniformSource {
    /// Next value in [0, 1), always strictly positive.
    fn next_u(&mut self) -> Result<f64>;

    /// Jump ahead by `n` draws without producing them.
    fn skip(&mut self, n: u64) -> Result<()>;

    fn take(&mut self, n: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.next_u()?);
        }
        Ok(out)
    }
}

/// Concrete source selected at runtime (CLI, bindings). Enum dispatch keeps
/// Clone and lets engines stay generic without trait objects.
#[derive(Debug, Clone)]
pub enum AnySource {
    Lcg(Lcg),
    Torus(Torus),
    Mixed(MixedTorus<Lcg>),
    MixedByTorus(MixedTorus<Torus>),
}

impl UniformSource for AnySource {
    fn next_u(&mut self) -> Result<f64> {
        match self {
            AnySource::Lcg(s) => s.next_u(),
            AnySource::Torus(s) => s.next_u(),
            AnySource::Mixed(s) => s.next_u(),
            AnySource::MixedByTorus(s) => s.next_u(),
        }
    }

    fn skip(&mut self, n: u64) -> Result<()> {
        match self {
            AnySource::Lcg(s) => s.skip(n),
            AnySource::Torus(s) => s.skip(n),
            AnySource::Mixed(s) => s.skip(n),
            AnySource::MixedByTorus(s) => s.skip(n),
        }
    }
}
