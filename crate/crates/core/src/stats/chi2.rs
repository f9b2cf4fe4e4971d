use crate::error::{Error, Result};
use crate::special::chi_square_survival;
use crate::stats::{verdict_from_p, CategoryDetail, TestDetails, TestReport};

/// Pearson chi-square on category counts against given probabilities:
/// D2 = sum (N_k - n pi_k)^2 / (n pi_k), referred to a chi-square law with
/// d - 1 degrees of freedom.
///
/// Preconditions: every pi_k > 0 and the pi_k sum to 1 (within 1e-9).
/// Counts of zero are fine; zero *expected* mass is not.
pub fn chi_square_test(observed: &[u64], probs: &[f64], alpha: f64) -> Result<TestReport> {
    if observed.len() != probs.len() {
        return Err(Error::CategoryLengthMismatch {
            observed: observed.len(),
            probs: probs.len(),
        });
    }
    if observed.len() < 2 {
        return Err(Error::SampleTooSmall {
            need: 2,
            got: observed.len(),
        });
    }
    for (k, &p) in probs.iter().enumerate() {
        if !(p > 0.0) {
            return Err(Error::BadCategoryProb(k));
        }
    }
    let total_p: f64 = probs.iter().sum();
    if (total_p - 1.0).abs() > 1e-9 {
        return Err(Error::ProbsDontSumToOne(total_p));
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }

    let nf = n as f64;
    let mut stat = 0.0;
    let categories: Vec<CategoryDetail> = observed
        .iter()
        .zip(probs)
        .enumerate()
        .map(|(k, (&obs, &p))| {
            let expected = nf * p;
            let diff = obs as f64 - expected;
            stat += diff * diff / expected;
            CategoryDetail {
                label: format!("bin_{k}"),
                observed: obs,
                expected,
            }
        })
        .collect();

    let df = (observed.len() - 1) as f64;
    let p_value = chi_square_survival(stat, df);
    Ok(TestReport {
        name: "chi2".into(),
        statistic: stat,
        p_value,
        alpha,
        verdict: verdict_from_p(p_value, alpha),
        details: TestDetails {
            categories: Some(categories),
            notes: vec![],
        },
    })
}

/// Chi-square uniformity check: bins [0,1) into `bins` equal cells.
pub fn chi_square_uniform(sample: &[f64], bins: usize, alpha: f64) -> Result<TestReport> {
    if bins < 2 {
        return Err(Error::SampleTooSmall { need: 2, got: bins });
    }
    if sample.is_empty() {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    let mut counts = vec![0u64; bins];
    for &x in sample {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::OutOfDomain {
                name: "sample value",
                value: x,
                reason: "uniformity binning needs values in [0, 1)",
            });
        }
        counts[(x * bins as f64) as usize] += 1;
    }
    let probs = vec![1.0 / bins as f64; bins];
    chi_square_test(&counts, &probs, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Lcg, UniformSource};

    #[test]
    fn two_bin_worked_example() {
        // 60/40 split over 100 draws at pi = (1/2, 1/2):
        // D2 = (10^2 + 10^2)/50 = 4, survival of chi2(1) at 4 is 0.0455
        let report = chi_square_test(&[60, 40], &[0.5, 0.5], 0.05).unwrap();
        assert!((report.statistic - 4.0).abs() < 1e-12);
        assert!((report.p_value - 0.0455).abs() < 1e-4);
        assert!((report.p_value - 0.04550026389635857).abs() < 1e-12);
        assert!(!report.passed());
    }

    #[test]
    fn exact_proportions_give_zero_statistic() {
        let report = chi_square_test(&[25, 25, 25, 25], &[0.25; 4], 0.05).unwrap();
        assert_eq!(report.statistic, 0.0);
        assert_eq!(report.p_value, 1.0);
        assert!(report.passed());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(chi_square_test(&[1, 2, 3], &[0.5, 0.5], 0.05).is_err());
        assert!(matches!(
            chi_square_test(&[1, 2], &[1.0, 0.0], 0.05),
            Err(Error::BadCategoryProb(1))
        ));
        assert!(matches!(
            chi_square_test(&[1, 2], &[0.6, 0.6], 0.05),
            Err(Error::ProbsDontSumToOne(_))
        ));
        assert!(chi_square_test(&[0, 0], &[0.5, 0.5], 0.05).is_err());
    }

    #[test]
    fn minstd_uniformity_at_20_bins() {
        let mut g = Lcg::minstd(12345).unwrap();
        let sample = g.take(10_000).unwrap();
        let report = chi_square_uniform(&sample, 20, 0.05).unwrap();
        assert!(report.passed(), "p = {}", report.p_value);
        let cats = report.details.categories.unwrap();
        assert_eq!(cats.len(), 20);
        assert!(cats.iter().all(|c| (c.expected - 500.0).abs() < 1e-9));
    }

    #[test]
    fn detects_a_biased_source() {
        // squash uniforms toward 0; the test must reject
        let mut g = Lcg::minstd(1).unwrap();
        let sample: Vec<f64> = g.take(10_000).unwrap().iter().map(|u| u * u).collect();
        let report = chi_square_uniform(&sample, 20, 0.05).unwrap();
        assert!(!report.passed());
        assert!(report.p_value < 1e-10);
    }
}
