use crate::error::{Error, Result};
use crate::special::kolmogorov_cdf;
use crate::stats::{verdict_from_p, TestDetails, TestReport};

/// Kolmogorov-Smirnov one-sample test against a fully specified CDF.
///
/// D_n = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n) over the ordered
/// sample, and the p-value is 1 - K(sqrt(n) * D_n) with K the Kolmogorov
/// law. The asymptotic reference is what the battery standardizes on; it
/// is already accurate for the sample sizes the battery runs at (10^3+).
pub fn ks_test(sample: &[f64], cdf: impl Fn(f64) -> f64, alpha: f64) -> Result<TestReport> {
    if sample.is_empty() {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("sample values must be orderable"));
    if !sorted[0].is_finite() || !sorted[sorted.len() - 1].is_finite() {
        return Err(Error::OutOfDomain {
            name: "sample value",
            value: f64::NAN,
            reason: "sample must be finite",
        });
    }

    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::CdfOutOfRange { x, value: f });
        }
        let upper = (i + 1) as f64 / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper).max(lower);
    }

    let p_value = 1.0 - kolmogorov_cdf(n.sqrt() * d);
    Ok(TestReport {
        name: "ks".into(),
        statistic: d,
        p_value,
        alpha,
        verdict: verdict_from_p(p_value, alpha),
        details: TestDetails::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Lcg, UniformSource};

    fn uniform_cdf(x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    #[test]
    fn single_point_worked_example() {
        // sample {0.5} against U(0,1): D_1 = max(1 - 0.5, 0.5 - 0) = 0.5
        let report = ks_test(&[0.5], uniform_cdf, 0.05).unwrap();
        assert_eq!(report.statistic, 0.5);
    }

    #[test]
    fn statistic_is_order_invariant() {
        let a = ks_test(&[0.9, 0.1, 0.5, 0.3], uniform_cdf, 0.05).unwrap();
        let b = ks_test(&[0.1, 0.3, 0.5, 0.9], uniform_cdf, 0.05).unwrap();
        assert_eq!(a.statistic, b.statistic);
    }

    #[test]
    fn own_quantiles_reach_the_floor() {
        // sample at (2i-1)/(2n): both one-sided gaps equal 1/(2n) everywhere
        let n = 100;
        let sample: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64 / (2 * n) as f64).collect();
        let report = ks_test(&sample, uniform_cdf, 0.05).unwrap();
        assert!((report.statistic - 1.0 / (2.0 * n as f64)).abs() < 1e-12);
        assert!(report.p_value > 0.999999);
    }

    #[test]
    fn empirical_cdf_of_the_sample_itself_gives_at_most_one_over_n() {
        let mut g = Lcg::minstd(99).unwrap();
        let sample = g.take(500).unwrap();
        let mut sorted = sample.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ecdf = move |x: f64| {
            let k = sorted.partition_point(|&v| v <= x);
            k as f64 / 500.0
        };
        let report = ks_test(&sample, ecdf, 0.05).unwrap();
        assert!(report.statistic <= 1.0 / 500.0 + 1e-12);
    }

    #[test]
    fn five_percent_critical_value_is_1_358_over_sqrt_n() {
        // place a sample so that sqrt(n) D_n is just below/above 1.358
        let n = 10_000usize;
        let crit = 1.358 / (n as f64).sqrt();
        let mk = |shift: f64| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    // shifted quantile grid: a uniform drift of size `shift`
                    (((2 * i + 1) as f64 / (2 * n) as f64) + shift).clamp(0.0, 1.0 - 1e-12)
                })
                .collect()
        };
        let below = ks_test(&mk(crit * 0.9), uniform_cdf, 0.05).unwrap();
        let above = ks_test(&mk(crit * 1.2), uniform_cdf, 0.05).unwrap();
        assert!(below.passed(), "p = {}", below.p_value);
        assert!(!above.passed(), "p = {}", above.p_value);
    }

    #[test]
    fn minstd_against_uniform_passes() {
        let mut g = Lcg::minstd(12345).unwrap();
        let sample = g.take(10_000).unwrap();
        let report = ks_test(&sample, uniform_cdf, 0.05).unwrap();
        assert!(report.passed(), "p = {}", report.p_value);
    }

    #[test]
    fn rejects_cdf_values_outside_unit_interval() {
        let bad = |_: f64| 1.5;
        assert!(matches!(
            ks_test(&[0.5], bad, 0.05),
            Err(Error::CdfOutOfRange { .. })
        ));
    }
}
