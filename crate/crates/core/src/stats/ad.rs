use crate::error::{Error, Result};
use crate::special::anderson_darling_cdf;
use crate::stats::{verdict_from_p, TestDetails, TestReport};

/// Tabulated critical values of A^2 for a fully specified null.
const AD_CRITICAL: [(f64, f64); 3] = [(0.10, 1.933), (0.05, 2.492), (0.01, 3.857)];

/// Critical value of the Anderson-Darling statistic at `alpha` for a fully
/// specified null (alpha must be one of 0.10, 0.05, 0.01).
pub fn ad_critical_value(alpha: f64) -> Result<f64> {
    AD_CRITICAL
        .iter()
        .find(|(a, _)| (a - alpha).abs() < 1e-12)
        .map(|(_, c)| *c)
        .ok_or(Error::OutOfDomain {
            name: "alpha",
            value: alpha,
            reason: "tabulated levels are 0.10, 0.05 and 0.01",
        })
}

/// Anderson-Darling test against a fully specified CDF:
/// A^2 = -n - (1/n) sum_i (2i-1) [ln F(x_(i)) + ln(1 - F(x_(n-i+1)))].
///
/// The verdict uses the tabulated critical value when `alpha` is one of
/// the standard levels, and the asymptotic p-value otherwise. The p-value
/// itself comes from the asymptotic law of A^2, so it is comparable across
/// samples and against the other tests of the battery.
pub fn anderson_darling_test(
    sample: &[f64],
    cdf: impl Fn(f64) -> f64,
    alpha: f64,
) -> Result<TestReport> {
    if sample.is_empty() {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("sample values must be orderable"));

    let n = sorted.len();
    let nf = n as f64;
    let f: Vec<f64> = sorted
        .iter()
        .map(|&x| {
            let v = cdf(x);
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::CdfOutOfRange { x, value: v });
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;

    let mut acc = 0.0;
    for i in 0..n {
        let weight = (2 * (i + 1) - 1) as f64;
        acc += weight * (f[i].ln() + (1.0 - f[n - 1 - i]).ln());
    }
    let statistic = -nf - acc / nf;

    let p_value = 1.0 - anderson_darling_cdf(statistic);
    let verdict = match ad_critical_value(alpha) {
        Ok(crit) => {
            if statistic <= crit {
                super::Verdict::Pass
            } else {
                super::Verdict::Fail
            }
        }
        Err(_) => verdict_from_p(p_value, alpha),
    };

    Ok(TestReport {
        name: "ad".into(),
        statistic,
        p_value,
        alpha,
        verdict,
        details: TestDetails::default(),
    })
}
