use crate::error::{Error, Result};
use crate::rng::UniformSource;

/// Linear congruential generator, state' = (a*state + c) mod m.
///
/// Defaults to the minimal-standard parameters a = 48271, c = 0,
/// m = 2^31 - 1. A compatibility constructor reproduces the legacy
/// spreadsheet generator (a = 1140671485, c = 12820163, m = 2^24) whose
/// short period shows up in large Monte-Carlo runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcg {
    multiplier: u64,
    increment: u64,
    modulus: u64,
    state: u64,
}

impl Lcg {
    pub const MINSTD_MULTIPLIER: u64 = 48271;
    pub const MINSTD_MODULUS: u64 = (1 << 31) - 1;

    pub const COMPAT_MULTIPLIER: u64 = 1_140_671_485;
    pub const COMPAT_INCREMENT: u64 = 12_820_163;
    pub const COMPAT_MODULUS: u64 = 1 << 24;

    /// Minimal-standard generator. `seed` is reduced mod 2^31 - 1 and must
    /// not land on 0 (a multiplicative generator stays at 0 forever).
    pub fn minstd(seed: u64) -> Result<Self> {
        Self::with_params(seed, Self::MINSTD_MULTIPLIER, 0, Self::MINSTD_MODULUS)
    }

    /// Legacy spreadsheet generator with modulus 2^24. The nonzero increment
    /// makes seed 0 legal here.
    pub fn compat(seed: u64) -> Result<Self> {
        Self::with_params(
            seed,
            Self::COMPAT_MULTIPLIER,
            Self::COMPAT_INCREMENT,
            Self::COMPAT_MODULUS,
        )
    }

    pub fn with_params(seed: u64, multiplier: u64, increment: u64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadLcgParams("modulus must be at least 2"));
        }
        // m < 2^63 keeps a*s + c inside u128 with room to spare
        if modulus > (1 << 63) {
            return Err(Error::BadLcgParams("modulus must be below 2^63"));
        }
        // the recurrence only sees a and c modulo m, so published
        // parameter sets quoted above the modulus reduce to the same
        // stream
        let multiplier = multiplier % modulus;
        let increment = increment % modulus;
        if multiplier == 0 {
            return Err(Error::BadLcgParams("multiplier must be nonzero modulo the modulus"));
        }
        let state = seed % modulus;
        if state == 0 && increment == 0 {
            return Err(Error::DegenerateSeed);
        }
        Ok(Self {
            multiplier,
            increment,
            modulus,
            state,
        })
    }

    /// Raw integer state after the last step; draws are state/modulus.
    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn advance(&mut self) {
        let m = self.modulus as u128;
        let next = (self.multiplier as u128 * self.state as u128 + self.increment as u128) % m;
        self.state = next as u64;
    }

    /// Number of steps until the state first repeats, capped at `max_steps`.
    /// Useful for checking full-period parameter choices on small moduli.
    pub fn cycle_length(&self, max_steps: u64) -> Option<u64> {
        let mut probe = self.clone();
        for k in 1..=max_steps {
            probe.advance();
            if probe.state == self.state {
                return Some(k);
            }
        }
        None
    }
}

impl UniformSource for Lcg {
    fn next_u(&mut self) -> Result<f64> {
        self.advance();
        let v = self.state as f64 / self.modulus as f64;
        // state 0 is reachable when the increment is nonzero; remap to the
        // generator's smallest positive draw so ln(u) stays finite
        if v == 0.0 {
            Ok(1.0 / self.modulus as f64)
        } else {
            Ok(v)
        }
    }

    fn skip(&mut self, n: u64) -> Result<()> {
        // compose the affine map (a, c) with itself by binary exponentiation:
        // (a1, c1) after (a2, c2) is (a1*a2, a1*c2 + c1), all mod m
        let m = self.modulus as u128;
        let mut acc_a: u128 = 1;
        let mut acc_c: u128 = 0;
        let mut base_a = self.multiplier as u128;
        let mut base_c = self.increment as u128;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc_c = (base_a * acc_c + base_c) % m;
                acc_a = (acc_a * base_a) % m;
            }
            base_c = (base_a * base_c + base_c) % m;
            base_a = (base_a * base_a) % m;
            k >>= 1;
        }
        self.state = ((acc_a * self.state as u128 + acc_c) % m) as u64;
        Ok(())
    }
}
