//! Uniform-to-distribution transforms: Box-Muller pairs, the
//! Beasley-Springer-Moro inverse normal, Poisson counts by exponential
//! sums, and a generic inverse-CDF adapter.
//!
//! The default way to turn a source into normals is Moro inversion: one
//! uniform in, one normal out, strictly monotone. That mapping preserves
//! the low-discrepancy structure of quasi-random sources, which Box-Muller
//! (a two-to-two map) scrambles.

use crate::error::{Error, Result};
use crate::rng::UniformSource;

/// Box-Muller: two independent uniforms to two independent standard
/// normals, x1 = sqrt(-2 ln u1) cos(2 pi u2), x2 = the sine branch.
/// u1 must be strictly positive; sources here never emit 0.
pub fn box_muller(u1: f64, u2: f64) -> Result<(f64, f64)> {
    if !(u1 > 0.0 && u1 <= 1.0) {
        return Err(Error::OutOfDomain {
            name: "u1",
            value: u1,
            reason: "needs 0 < u1 <= 1 for ln(u1)",
        });
    }
    if !(0.0..1.0).contains(&u2) {
        return Err(Error::OutOfDomain {
            name: "u2",
            value: u2,
            reason: "needs 0 <= u2 < 1",
        });
    }
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    Ok((radius * angle.cos(), radius * angle.sin()))
}

// Beasley-Springer rational minimax coefficients for the central region
const MORO_A: [f64; 4] = [
    2.50662823884,
    -18.61500062529,
    41.39119773534,
    -25.44106049637,
];
const MORO_B: [f64; 4] = [
    -8.47351093090,
    23.08336743743,
    -21.06224101826,
    3.13082909833,
];
// Moro's Chebyshev fit in s = ln(-ln(1-u)) for the tails
const MORO_C: [f64; 9] = [
    0.3374754822726147,
    0.9761690190917186,
    0.1607979714918209,
    0.0276438810333863,
    0.0038405729373609,
    0.0003951896511919,
    0.0000321767881768,
    0.0000002888167364,
    0.0000003960315187,
];

/// Inverse standard normal CDF, Beasley-Springer-Moro algorithm.
/// Max absolute error below 3e-9 for u in [1e-10, 1 - 1e-10].
pub fn moro_inverse_normal(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::OutOfDomain {
            name: "u",
            value: u,
            reason: "quantile function needs 0 < u < 1",
        });
    }
    let y = u - 0.5;
    if y.abs() < 0.42 {
        let r = y * y;
        let num = ((MORO_A[3] * r + MORO_A[2]) * r + MORO_A[1]) * r + MORO_A[0];
        let den = (((MORO_B[3] * r + MORO_B[2]) * r + MORO_B[1]) * r + MORO_B[0]) * r + 1.0;
        Ok(y * num / den)
    } else {
        let r = if y > 0.0 { 1.0 - u } else { u };
        let s = (-r.ln()).ln();
        let mut t = 0.0;
        for c in MORO_C.iter().rev() {
            t = t * s + c;
        }
        Ok(if y > 0.0 { t } else { -t })
    }
}

/// Standard exponential by inversion, -ln(1 - u). Written against 1 - u so
/// that u = 0 is safe and the map is increasing in u.
pub fn exponential_sample(u: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::OutOfDomain {
            name: "u",
            value: u,
            reason: "needs 0 <= u < 1",
        });
    }
    Ok(-(1.0 - u).ln())
}

/// Poisson(lambda) count: the smallest n such that the sum of n + 1 unit
/// exponentials exceeds lambda (the number of renewal arrivals in [0,
/// lambda]). Consumes a variable number of uniforms, on average lambda + 1.
pub fn poisson_sample<S: UniformSource + ?Sized>(lambda: f64, source: &mut S) -> Result<u64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::OutOfDomain {
            name: "lambda",
            value: lambda,
            reason: "Poisson intensity must be positive and finite",
        });
    }
    let mut acc = 0.0;
    let mut n = 0u64;
    loop {
        acc += exponential_sample(source.next_u()?)?;
        if acc > lambda {
            return Ok(n);
        }
        n += 1;
    }
}

/// Generic inversion: push a uniform through any quantile function.
pub fn inverse_cdf_sample(quantile: impl Fn(f64) -> f64, u: f64) -> f64 {
    quantile(u)
}

/// How a [`NormalSource`] turns uniforms into normals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalMethod {
    /// One uniform per normal via [`moro_inverse_normal`]; the default.
    MoroInverse,
    /// Two uniforms per pair of normals via [`box_muller`]; the second
    /// normal of a pair is cached.
    BoxMuller,
}

impl NormalMethod {
    /// Uniforms consumed to produce `n` normals from a fresh stream.
    pub fn uniforms_needed(self, n: u64) -> u64 {
        match self {
            NormalMethod::MoroInverse => n,
            NormalMethod::BoxMuller => n.div_ceil(2) * 2,
        }
    }
}

/// Adapter producing standard normals from any uniform source.
#[derive(Debug, Clone)]
pub struct NormalSource<S: UniformSource> {
    source: S,
    method: NormalMethod,
    cached: Option<f64>,
}

impl<S: UniformSource> NormalSource<S> {
    pub fn new(source: S, method: NormalMethod) -> Self {
        Self {
            source,
            method,
            cached: None,
        }
    }

    /// Moro inversion, the method that keeps quasi-random structure intact.
    pub fn standard(source: S) -> Self {
        Self::new(source, NormalMethod::MoroInverse)
    }

    pub fn method(&self) -> NormalMethod {
        self.method
    }

    pub fn next_normal(&mut self) -> Result<f64> {
        match self.method {
            NormalMethod::MoroInverse => moro_inverse_normal(self.source.next_u()?),
            NormalMethod::BoxMuller => {
                if let Some(z) = self.cached.take() {
                    return Ok(z);
                }
                let (z0, z1) = box_muller(self.source.next_u()?, self.source.next_u()?)?;
                self.cached = Some(z1);
                Ok(z0)
            }
        }
    }

    pub fn take_normals(&mut self, n: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.next_normal()?);
        }
        Ok(out)
    }
}

impl<S: UniformSource + Clone> NormalSource<S> {
    /// Stream for block `block_index` when every block consumes
    /// `normals_per_block` normals: the underlying uniforms are skipped to
    /// the block start and pairing restarts, so block k of a sequential run
    /// and an independently derived block k see identical draws. This is
    /// the trajectory-major contract the path engine relies on.
    pub fn derive(&self, block_index: u64, normals_per_block: u64) -> Result<Self> {
        let stride = self.method.uniforms_needed(normals_per_block);
        let mut source = self.source.clone();
        source.skip(block_index * stride)?;
        Ok(Self {
            source,
            method: self.method,
            cached: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Lcg, MixedTorus, Torus};
    use crate::special::normal_cdf;

    /// Bisection inverse of the high-accuracy normal CDF; the independent
    /// reference the Moro polynomial is judged against.
    fn quantile_by_bisection(u: f64) -> f64 {
        let (mut lo, mut hi) = (-40.0f64, 40.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if normal_cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn box_muller_worked_examples() {
        let (x1, x2) = box_muller(1.0, 0.3).unwrap();
        assert_eq!((x1, x2), (0.0, 0.0));

        let (x1, x2) = box_muller((-0.5f64).exp(), 0.0).unwrap();
        assert!((x1 - 1.0).abs() < 1e-15 && x2.abs() < 1e-15);

        let (x1, x2) = box_muller((-2.0f64).exp(), 0.25).unwrap();
        assert!(x1.abs() < 1e-15 && (x2 - 2.0).abs() < 1e-15);

        assert!(box_muller(0.0, 0.5).is_err());
    }

    #[test]
    fn box_muller_radius_identity() {
        // x1^2 + x2^2 recovers -2 ln u1 up to a few ulps
        let mut g = Lcg::minstd(7).unwrap();
        for _ in 0..2_000 {
            let u1 = g.next_u().unwrap();
            let u2 = g.next_u().unwrap();
            let (x1, x2) = box_muller(u1, u2).unwrap();
            let want = -2.0 * u1.ln();
            let got = x1 * x1 + x2 * x2;
            assert!((got - want).abs() <= 4.0 * f64::EPSILON * want.abs().max(1.0));
        }
    }

    // (u, inverse normal CDF at u), frozen from a 50-digit computation
    const QUANTILE_REF: [(f64, f64); 17] = [
        (1e-10, -6.361340902404057),
        (3e-10, -6.1904308113947675),
        (1e-9, -5.9978070150076865),
        (1e-8, -5.612001244174789),
        (1e-7, -5.1993375821928165),
        (1e-6, -4.753424308822899),
        (1e-5, -4.264890793922825),
        (1e-4, -3.7190164854556804),
        (1e-3, -3.0902323061678136),
        (0.01, -2.326347874040841),
        (0.025, -1.9599639845400543),
        (0.05, -1.6448536269514726),
        (0.1, -1.2815515655446004),
        (0.2, -0.8416212335729142),
        (0.3, -0.5244005127080408),
        (0.4, -0.2533471031357998),
        (0.45, -0.12566134685507405),
    ];

    // the f64 nearest 1 - u sits a few 1e-17 off the real complement,
    // which the quantile magnifies past 3e-9 in the deep tail, so the
    // upper-tail oracle is evaluated at the exact f64 probe values
    const UPPER_QUANTILE_REF: [(f64, f64); 9] = [
        (0.9999999999, 6.361340889697422),
        (0.9999999997, 6.190430798353428),
        (0.999999999, 5.9978070196016375),
        (0.99999999, 5.612001243305505),
        (0.9999999, 5.199337582290661),
        (0.999999, 4.753424308817087),
        (0.99999, 4.264890793923841),
        (0.9999, 3.7190164854557084),
        (0.999, 3.090232306167813),
    ];

    #[test]
    fn moro_stays_within_3e9_of_the_quantile_oracle() {
        // frozen oracle points cover both tails down to 1e-10
        for (u, z) in QUANTILE_REF {
            assert!(
                (moro_inverse_normal(u).unwrap() - z).abs() < 3e-9,
                "u = {u}"
            );
            if u >= 0.01 {
                // mirrored probes are safe where 1 - u is exact enough
                assert!(
                    (moro_inverse_normal(1.0 - u).unwrap() + z).abs() < 3e-9,
                    "u = 1 - {u}"
                );
            }
        }
        for (u, z) in UPPER_QUANTILE_REF {
            assert!(
                (moro_inverse_normal(u).unwrap() - z).abs() < 3e-9,
                "u = {u}"
            );
        }
        // dense central sweep against bisection of the CDF, whose own
        // error stays far below 3e-9 for moderate quantiles
        let mut worst = 0.0f64;
        for i in 1..400 {
            let probe = i as f64 / 400.0;
            let err = (moro_inverse_normal(probe).unwrap() - quantile_by_bisection(probe)).abs();
            worst = worst.max(err);
        }
        assert!(worst < 3e-9, "worst Moro error {worst}");
    }

    #[test]
    fn moro_is_monotone_and_antisymmetric() {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..2000 {
            let u = i as f64 / 2000.0;
            let z = moro_inverse_normal(u).unwrap();
            assert!(z > prev);
            prev = z;
            let mirror = moro_inverse_normal(1.0 - u).unwrap();
            assert!((z + mirror).abs() < 5e-9, "antisymmetry at {u}");
        }
        assert_eq!(moro_inverse_normal(0.5).unwrap(), 0.0);
        assert!(moro_inverse_normal(0.0).is_err());
        assert!(moro_inverse_normal(1.0).is_err());
    }

    #[test]
    fn moro_round_trip_through_reference_cdf() {
        let mut u = 1e-6;
        while u < 1.0 - 1e-6 {
            let z = moro_inverse_normal(u).unwrap();
            assert!((normal_cdf(z) - u).abs() < 1e-8, "round trip at {u}");
            u += 7.1e-4;
        }
    }

    /// Source replaying scripted values; turns the Poisson renewal logic
    /// into a deterministic check.
    #[derive(Debug, Clone)]
    struct Script(Vec<f64>, usize);

    impl UniformSource for Script {
        fn next_u(&mut self) -> Result<f64> {
            let v = self.0[self.1];
            self.1 += 1;
            Ok(v)
        }
        fn skip(&mut self, n: u64) -> Result<()> {
            self.1 += n as usize;
            Ok(())
        }
    }

    #[test]
    fn poisson_counts_renewals_before_lambda() {
        // exponentials 0.3, 0.4, 0.5: the partial sums pass 1.0 at the third
        // arrival, so N = 2
        let us: Vec<f64> = [0.3f64, 0.4, 0.5].iter().map(|v| 1.0 - (-v).exp()).collect();
        let mut src = Script(us, 0);
        assert_eq!(poisson_sample(1.0, &mut src).unwrap(), 2);

        // first exponential already exceeds lambda: N = 0
        let mut src = Script(vec![1.0 - (-5.0f64).exp()], 0);
        assert_eq!(poisson_sample(1.0, &mut src).unwrap(), 0);

        assert!(poisson_sample(0.0, &mut Script(vec![0.5], 0)).is_err());
        assert!(poisson_sample(-1.0, &mut Script(vec![0.5], 0)).is_err());
    }

    #[test]
    fn poisson_sample_mean_matches_lambda() {
        let mut src = Lcg::minstd(2024).unwrap();
        let lambda = 4.0;
        let n = 20_000;
        let mut sum = 0u64;
        for _ in 0..n {
            sum += poisson_sample(lambda, &mut src).unwrap();
        }
        let mean = sum as f64 / n as f64;
        // 3 standard errors of the mean, sd = sqrt(lambda)
        let tol = 3.0 * (lambda / n as f64).sqrt();
        assert!((mean - lambda).abs() < tol, "mean {mean}");
    }

    #[test]
    fn exponential_inversion_is_safe_at_zero() {
        assert_eq!(exponential_sample(0.0).unwrap(), 0.0);
        assert!(exponential_sample(1.0).is_err());
        assert!((exponential_sample(1.0 - (-2.0f64).exp()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_cdf_adapter_applies_quantile() {
        // exponential quantile through the adapter
        let q = |u: f64| -(1.0 - u).ln();
        assert!((inverse_cdf_sample(q, 0.5) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn normal_source_box_muller_caches_the_pair() {
        let src = Lcg::minstd(5).unwrap();
        let mut ns = NormalSource::new(src.clone(), NormalMethod::BoxMuller);
        let mut raw = src;
        let u1 = raw.next_u().unwrap();
        let u2 = raw.next_u().unwrap();
        let (want0, want1) = box_muller(u1, u2).unwrap();
        assert_eq!(ns.next_normal().unwrap().to_bits(), want0.to_bits());
        assert_eq!(ns.next_normal().unwrap().to_bits(), want1.to_bits());
    }

    #[test]
    fn derived_streams_tile_the_sequential_stream() {
        // any method, any per-block count: block k of the sequential stream
        // equals an independently derived block k
        for method in [NormalMethod::MoroInverse, NormalMethod::BoxMuller] {
            let base = NormalSource::new(
                MixedTorus::new(2, 10_000, 9).unwrap(),
                method,
            );
            // even block size, so Box-Muller pairs never straddle a
            // boundary and a straight read tiles exactly
            let per_block = 6u64;
            let mut sequential = base.clone();
            let all = sequential.take_normals(5 * per_block as usize).unwrap();
            for block in 0..5u64 {
                let mut derived = base.derive(block, per_block).unwrap();
                let got = derived.take_normals(per_block as usize).unwrap();
                let want = &all[(block * per_block) as usize..((block + 1) * per_block) as usize];
                assert_eq!(got, want, "block {block}");
            }
        }
    }

    #[test]
    fn uniforms_needed_accounts_for_pairing() {
        assert_eq!(NormalMethod::MoroInverse.uniforms_needed(5), 5);
        assert_eq!(NormalMethod::BoxMuller.uniforms_needed(5), 6);
        assert_eq!(NormalMethod::BoxMuller.uniforms_needed(6), 6);
        assert_eq!(NormalMethod::BoxMuller.uniforms_needed(0), 0);
    }

    #[test]
    fn moro_transformed_torus_sample_is_normal_by_moments() {
        let torus = Torus::new(2).unwrap();
        let mut ns = NormalSource::standard(torus);
        let zs = ns.take_normals(100_000).unwrap();
        let n = zs.len() as f64;
        let mean = zs.iter().sum::<f64>() / n;
        let var = zs.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / n;
        // quasi-random stream: moments land much tighter than Monte Carlo
        assert!(mean.abs() < 1e-3, "mean {mean}");
        assert!((var - 1.0).abs() < 1e-2, "variance {var}");
    }
}
