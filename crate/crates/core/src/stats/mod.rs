//! Statistical acceptance battery for uniform sources: chi-square on bin
//! counts, Kolmogorov-Smirnov and Anderson-Darling against an arbitrary
//! CDF, the poker hand test on decimal digits, and the correlogram.
//!
//! Every test returns a [`TestReport`] with the statistic, a p-value and a
//! verdict at the requested level, plus per-category detail where that
//! makes sense. Reports serialize directly into the JSON the CLI emits.

mod ad;
mod chi2;
mod correlogram;
mod ks;
mod poker;

pub use ad::{anderson_darling_test, ad_critical_value};
pub use chi2::{chi_square_test, chi_square_uniform};
pub use correlogram::correlogram;
pub use ks::ks_test;
pub use poker::{poker_test, poker_theoretical_probs, PokerFrequencies, POKER_LABELS};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One category line of a count-based test.
#[derive(Debug, Clone, Serialize)]
pub struct CategoryDetail {
    pub label: String,
    pub observed: u64,
    pub expected: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TestDetails {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub categories: Option<Vec<CategoryDetail>>,
    /// Anything the test decided on the way, e.g. category merges.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TestReport {
    #[serde(rename = "test")]
    pub name: String,
    pub statistic: f64,
    /// Probability of a statistic at least this extreme under the null.
    pub p_value: f64,
    /// Level the verdict was taken at.
    pub alpha: f64,
    pub verdict: Verdict,
    pub details: TestDetails,
}

impl TestReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub(crate) fn verdict_from_p(p_value: f64, alpha: f64) -> Verdict {
    if p_value >= alpha {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}
