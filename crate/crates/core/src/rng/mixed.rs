use crate::error::{Error, Result};
use crate::rng::{Lcg, Torus, UniformSource, TORUS_INDEX_LIMIT};

/// Torus sequence addressed through a mixing source.
///
/// Draw n does not read the torus at index n; instead a mixer uniform
/// u~ picks the address phi(n) = floor(alpha * capacity * u~) + 1 and the
/// draw is the torus value there. Sampling is with replacement: the same
/// address can be visited twice. With a congruential mixer this keeps the
/// torus equidistribution while destroying its serial correlation; mixing
/// one torus by another does not (the composed sequence is still a Weyl
/// line and stays correlated), which is why the mixer type is a parameter.
///
/// `capacity` is the number of draws the consumer declares up front; the
/// address space alpha * capacity has to stay inside the torus precision
/// bound, which is checked at construction.
#[derive(Debug, Clone)]
pub struct MixedTorus<M: UniformSource> {
    torus: Torus,
    mixer: M,
    alpha: f64,
    capacity: u64,
}

pub const DEFAULT_MIX_RATIO: f64 = 10.0;

impl MixedTorus<Lcg> {
    /// Standard configuration: minimal-standard congruential mixer,
    /// alpha = 10.
    pub fn new(prime: u64, capacity: u64, seed: u64) -> Result<Self> {
        Self::with_mixer(prime, capacity, DEFAULT_MIX_RATIO, Lcg::minstd(seed)?)
    }
}

impl<M: UniformSource> MixedTorus<M> {
    pub fn with_mixer(prime: u64, capacity: u64, alpha: f64, mixer: M) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(Error::BadMixRatio(alpha));
        }
        if capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        let span = alpha * capacity as f64;
        if span + 1.0 > TORUS_INDEX_LIMIT as f64 {
            return Err(Error::CapacityOverflow(span));
        }
        Ok(Self {
            torus: Torus::new(prime)?,
            mixer,
            alpha,
            capacity,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn prime(&self) -> u64 {
        self.torus.prime()
    }

    /// Address picked by a mixer value in [0, 1).
    fn address(&self, mix: f64) -> u64 {
        (self.alpha * self.capacity as f64 * mix).floor() as u64 + 1
    }
}

impl<M: UniformSource> UniformSource for MixedTorus<M> {
    fn next_u(&mut self) -> Result<f64> {
        let mix = self.mixer.next_u()?;
        self.torus.value_at(self.address(mix))
    }

    // one mixer draw per output draw, so skipping the mixer skips us
    fn skip(&mut self, n: u64) -> Result<()> {
        self.mixer.skip(n)
    }
}
