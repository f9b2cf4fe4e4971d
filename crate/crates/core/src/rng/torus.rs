use crate::error::{Error, Result};
use crate::rng::UniformSource;

/// Largest index at which fractional parts are still good to 1e-12.
///
/// n*sqrt(p) is evaluated from a two-part (hi + lo) representation of
/// sqrt(p) with exact product splitting, so the absolute error is a few
/// ulps of n*sqrt(p)*2^-53 from the lo product plus the final roundings.
/// At n = 1e8 and p <= 10^4 that is comfortably below 1e-12; past the bound
/// the generator refuses to run rather than drift.
pub const TORUS_INDEX_LIMIT: u64 = 100_000_000;

/// Quasi-random torus sequence u_n = frac(n * sqrt(p)) for a prime p.
///
/// Perfectly equidistributed (Weyl), which makes it excellent for plain
/// integration, but consecutive terms differ by the constant frac(sqrt(p)),
/// so the raw sequence carries strong serial correlation. Feed it through
/// [`crate::rng::MixedTorus`] when draws must look independent.
#[derive(Debug, Clone)]
pub struct Torus {
    prime: u64,
    rank: usize,
    index: u64,
    sqrt_hi: f64,
    sqrt_lo: f64,
}

/// Exact product of two doubles as an unevaluated hi + lo pair.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Torus {
    /// Torus over sqrt(p); p must be prime (e.g. 2, 3, 5, 7, 11, ...).
    pub fn new(prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        // two-part sqrt: hi is the rounded root, lo recovers its error from
        // p - hi^2 computed with an exact square
        let p = prime as f64;
        let hi = p.sqrt();
        let (sq, sq_err) = two_prod(hi, hi);
        let lo = ((p - sq) - sq_err) / (2.0 * hi);
        let rank = (2..=prime).filter(|&m| is_prime(m)).count();
        Ok(Self {
            prime,
            rank,
            index: 0,
            sqrt_hi: hi,
            sqrt_lo: lo,
        })
    }

    /// Torus over the d-th prime (d = 1 gives p = 2), matching the usual
    /// convention of assigning dimension d the d-th prime.
    pub fn nth(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 1_000 {
            return Err(Error::PrimeRankOutOfRange(rank));
        }
        let mut found = 0usize;
        let mut candidate = 1u64;
        while found < rank {
            candidate += 1;
            if is_prime(candidate) {
                found += 1;
            }
        }
        Self::new(candidate)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Rank of the prime (1 for p = 2, 2 for p = 3, ...).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Index of the last draw; the next draw is value_at(index + 1).
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Direct access to u_n = frac(n * sqrt(p)), n >= 1. Stepping the
    /// generator n times from a fresh state gives bit-identical values.
    pub fn value_at(&self, n: u64) -> Result<f64> {
        if n == 0 || n > TORUS_INDEX_LIMIT {
            return Err(Error::TorusIndexOverflow {
                index: n,
                limit: TORUS_INDEX_LIMIT,
            });
        }
        let nf = n as f64; // exact, n <= 1e8 < 2^53
        let (p_hi, p_lo) = two_prod(nf, self.sqrt_hi);
        // p_hi.fract() is exact: it extracts the low bits of p_hi, and the
        // bits lost to rounding in the product live in p_lo
        let mut f = p_hi.fract() + (p_lo + nf * self.sqrt_lo);
        f -= f.floor();
        if f <= 0.0 {
            // an astronomically near-integer multiple rounded down to 0
            f = 2f64.powi(-53);
        } else if f >= 1.0 {
            f = 1.0 - 2f64.powi(-53);
        }
        Ok(f)
    }
}

impl UniformSource for Torus {
    fn next_u(&mut self) -> Result<f64> {
        let n = self.index + 1;
        let v = self.value_at(n)?;
        self.index = n;
        Ok(v)
    }

    fn skip(&mut self, n: u64) -> Result<()> {
        let target = self.index.checked_add(n).ok_or(Error::TorusIndexOverflow {
            index: u64::MAX,
            limit: TORUS_INDEX_LIMIT,
        })?;
        if target > TORUS_INDEX_LIMIT {
            return Err(Error::TorusIndexOverflow {
                index: target,
                limit: TORUS_INDEX_LIMIT,
            });
        }
        self.index = target;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // frac(n * sqrt(p)) computed with 50-digit arithmetic
    const REF: [(u64, u64, f64); 24] = [
        (2, 1, 0.41421356237309503),
        (2, 2, 0.8284271247461901),
        (2, 3, 0.24264068711928516),
        (2, 10000, 0.13562373095048802),
        (2, 1000000, 0.5623730950488017),
        (2, 100000000, 0.23730950488016886),
        (5, 1, 0.2360679774997897),
        (5, 2, 0.4721359549995794),
        (5, 3, 0.7082039324993691),
        (5, 10000, 0.679774997896964),
        (5, 1000000, 0.9774997896964092),
        (5, 100000000, 0.7499789696409174),
        (7, 1, 0.6457513110645906),
        (7, 2, 0.29150262212918115),
        (7, 3, 0.9372539331937718),
        (7, 10000, 0.513110645905905),
        (7, 1000000, 0.3110645905905016),
        (7, 100000000, 0.10645905905016158),
        (19, 1, 0.35889894354067353),
        (19, 2, 0.7177978870813471),
        (19, 3, 0.07669683062202065),
        (19, 10000, 0.9894354067355223),
        (19, 1000000, 0.943540673552237),
        (19, 100000000, 0.3540673552236982),
    ];

    #[test]
    fn matches_high_precision_reference_to_1e12() {
        for (p, n, want) in REF {
            let t = Torus::new(p).unwrap();
            let got = t.value_at(n).unwrap();
            assert!(
                (got - want).abs() < 1e-12,
                "p={p} n={n}: {got} vs {want} (err {})",
                (got - want).abs()
            );
        }
    }

    #[test]
    fn sequential_equals_direct_indexing() {
        let mut seq = Torus::new(11).unwrap();
        let direct = seq.clone();
        for n in 1..=5_000u64 {
            let stepped = seq.next_u().unwrap();
            let addressed = direct.value_at(n).unwrap();
            assert_eq!(stepped.to_bits(), addressed.to_bits(), "n = {n}");
        }
    }

    #[test]
    fn skip_is_equivalent_to_stepping() {
        let mut a = Torus::new(5).unwrap();
        let mut b = a.clone();
        a.skip(777).unwrap();
        for _ in 0..777 {
            b.next_u().unwrap();
        }
        assert_eq!(a.next_u().unwrap().to_bits(), b.next_u().unwrap().to_bits());
    }

    #[test]
    fn index_overflow_is_an_error_not_a_drift() {
        let t = Torus::new(2).unwrap();
        assert!(t.value_at(TORUS_INDEX_LIMIT).is_ok());
        assert!(matches!(
            t.value_at(TORUS_INDEX_LIMIT + 1),
            Err(Error::TorusIndexOverflow { .. })
        ));
        let mut nearly = Torus::new(2).unwrap();
        nearly.skip(TORUS_INDEX_LIMIT).unwrap();
        assert!(nearly.next_u().is_err());
    }

    #[test]
    fn rejects_composites_and_accepts_primes() {
        for p in [4u64, 6, 9, 15, 100, 1] {
            assert!(matches!(Torus::new(p), Err(Error::NotPrime(_))), "{p}");
        }
        for p in [2u64, 3, 5, 7, 11, 13, 9973] {
            assert!(Torus::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn nth_prime_ranks() {
        let expected = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29];
        for (i, p) in expected.iter().enumerate() {
            let t = Torus::nth(i + 1).unwrap();
            assert_eq!(t.prime(), *p);
            assert_eq!(t.rank(), i + 1);
        }
        assert!(Torus::nth(0).is_err());
    }

    #[test]
    fn values_lie_in_open_unit_interval() {
        let mut t = Torus::new(3).unwrap();
        for _ in 0..10_000 {
            let v = t.next_u().unwrap();
            assert!(v > 0.0 && v < 1.0);
        }
    }

    #[test]
    fn equidistribution_beats_pseudo_random_discrepancy() {
        // 20-bin counts after 10^4 draws are within +-2 of the exact share
        let mut t = Torus::new(2).unwrap();
        let mut counts = [0u32; 20];
        for _ in 0..10_000 {
            let v = t.next_u().unwrap();
            counts[(v * 20.0) as usize] += 1;
        }
        for c in counts {
            assert!((c as i64 - 500).abs() <= 2, "count {c}");
        }
    }
}
