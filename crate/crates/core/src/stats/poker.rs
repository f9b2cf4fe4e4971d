use crate::error::{Error, Result};
use crate::stats::{chi_square_test, CategoryDetail, TestReport};

/// Category order is rarest first, matching the usual reporting layout.
pub const POKER_LABELS: [&str; 5] = [
    "four_of_a_kind",
    "three_of_a_kind",
    "two_pairs",
    "one_pair",
    "all_different",
];

/// Hand counts and relative frequencies over disjoint groups of 4 digits.
#[derive(Debug, Clone, PartialEq)]
pub struct PokerFrequencies {
    pub hands: u64,
    /// Counts in [`POKER_LABELS`] order.
    pub counts: [u64; 5],
    /// counts / hands, same order.
    pub frequencies: [f64; 5],
}

impl PokerFrequencies {
    pub fn get(&self, label: &str) -> Option<(u64, f64)> {
        POKER_LABELS
            .iter()
            .position(|l| *l == label)
            .map(|i| (self.counts[i], self.frequencies[i]))
    }
}

/// Exact hand probabilities on 4 independent decimal digits, as ratios of
/// favorable arrangements to 10^4:
/// four of a kind 10, three of a kind 360, two pairs 270, one pair 4320,
/// all different 5040.
pub fn poker_theoretical_probs() -> [f64; 5] {
    let total = 10_000.0;
    [
        10.0 / total,
        360.0 / total,
        270.0 / total,
        4_320.0 / total,
        5_040.0 / total,
    ]
}

fn classify(hand: [u8; 4]) -> usize {
    let mut counts = [0u8; 10];
    for d in hand {
        counts[d as usize] += 1;
    }
    let mut pairs = 0;
    let mut best = 0;
    for c in counts {
        if c == 2 {
            pairs += 1;
        }
        best = best.max(c);
    }
    match (best, pairs) {
        (4, _) => 0,
        (3, _) => 1,
        (2, 2) => 2,
        (2, 1) => 3,
        _ => 4,
    }
}

/// Poker test: map each uniform to its leading decimal digit floor(10u),
/// split the digit stream into disjoint hands of 4 and compare category
/// counts to the exact probabilities with a chi-square test.
///
/// A trailing group shorter than 4 digits is dropped. Categories whose
/// expected count falls below 1 are merged into the next more frequent
/// category before the chi-square step; every merge is recorded in the
/// report notes so degenerate sources remain diagnosable.
pub fn poker_test(uniforms: &[f64], alpha: f64) -> Result<(PokerFrequencies, TestReport)> {
    if uniforms.len() < 4 {
        return Err(Error::SampleTooSmall {
            need: 4,
            got: uniforms.len(),
        });
    }
    let hands = uniforms.len() / 4;
    let mut counts = [0u64; 5];
    for g in 0..hands {
        let mut hand = [0u8; 4];
        for (slot, &u) in hand.iter_mut().zip(&uniforms[4 * g..4 * g + 4]) {
            if !(0.0..1.0).contains(&u) {
                return Err(Error::OutOfDomain {
                    name: "uniform",
                    value: u,
                    reason: "digits need values in [0, 1)",
                });
            }
            *slot = (u * 10.0) as u8;
        }
        counts[classify(hand)] += 1;
    }
    let hands_f = hands as f64;
    let frequencies = counts.map(|c| c as f64 / hands_f);
    let freqs = PokerFrequencies {
        hands: hands as u64,
        counts,
        frequencies,
    };

    // merge rare cells (expected < 1) into the next category up
    let probs = poker_theoretical_probs();
    let mut merged_counts: Vec<u64> = Vec::with_capacity(5);
    let mut merged_probs: Vec<f64> = Vec::with_capacity(5);
    let mut merged_labels: Vec<String> = Vec::with_capacity(5);
    let mut notes = Vec::new();
    let mut carry_count = 0u64;
    let mut carry_prob = 0.0f64;
    let mut carry_labels: Vec<&str> = Vec::new();
    for k in 0..5 {
        let p = carry_prob + probs[k];
        let c = carry_count + counts[k];
        if hands_f * p < 1.0 && k < 4 {
            carry_prob = p;
            carry_count = c;
            carry_labels.push(POKER_LABELS[k]);
            continue;
        }
        let label = if carry_labels.is_empty() {
            POKER_LABELS[k].to_string()
        } else {
            carry_labels.push(POKER_LABELS[k]);
            let joined = carry_labels.join("+");
            notes.push(format!(
                "merged {} (expected count below 1 at {} hands)",
                joined, hands
            ));
            joined
        };
        merged_counts.push(c);
        merged_probs.push(p);
        merged_labels.push(label);
        carry_count = 0;
        carry_prob = 0.0;
        carry_labels.clear();
    }

    let mut report = chi_square_test(&merged_counts, &merged_probs, alpha)?;
    report.name = "poker".into();
    report.details.categories = Some(
        merged_labels
            .iter()
            .zip(&merged_counts)
            .zip(&merged_probs)
            .map(|((label, &obs), &p)| CategoryDetail {
                label: label.clone(),
                observed: obs,
                expected: hands_f * p,
            })
            .collect(),
    );
    report.details.notes = notes;
    Ok((freqs, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Lcg, Torus, UniformSource};

    #[test]
    fn theoretical_probabilities_are_the_exact_ratios() {
        let p = poker_theoretical_probs();
        assert_eq!(p, [0.001, 0.036, 0.027, 0.432, 0.504]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classifier_covers_all_hand_shapes() {
        assert_eq!(classify([7, 7, 7, 7]), 0);
        assert_eq!(classify([7, 7, 7, 2]), 1);
        assert_eq!(classify([7, 7, 2, 2]), 2);
        assert_eq!(classify([7, 7, 2, 3]), 3);
        assert_eq!(classify([0, 1, 2, 3]), 4);
        // exhaustive: every 4-digit hand lands in exactly one category and
        // the per-category totals reproduce the combinatorial counts
        let mut totals = [0u64; 5];
        for h in 0..10_000u32 {
            let hand = [
                (h / 1000 % 10) as u8,
                (h / 100 % 10) as u8,
                (h / 10 % 10) as u8,
                (h % 10) as u8,
            ];
            totals[classify(hand)] += 1;
        }
        assert_eq!(totals, [10, 360, 270, 4320, 5040]);
    }

    #[test]
    fn groups_are_disjoint_not_sliding() {
        // each hand holds four consecutive digits, and every hand starts
        // with the digit the previous one ended on: only a sliding window
        // would ever pair those up
        let mut u = Vec::with_capacity(40);
        for h in 0..10u32 {
            for k in 0..4u32 {
                u.push(((3 * h + k) % 10) as f64 / 10.0 + 0.05);
            }
        }
        let (freqs, _) = poker_test(&u, 0.05).unwrap();
        assert_eq!(freqs.hands, 10);
        assert_eq!(freqs.counts, [0, 0, 0, 0, 10]);
        // a trailing partial hand is dropped
        let (freqs, _) = poker_test(&u[..39], 0.05).unwrap();
        assert_eq!(freqs.hands, 9);
    }

    #[test]
    fn minstd_frequencies_match_theory() {
        let mut g = Lcg::minstd(2024).unwrap();
        let u = g.take(40_000).unwrap();
        let (freqs, report) = poker_test(&u, 0.05).unwrap();
        assert!(report.passed(), "p = {}", report.p_value);
        let probs = poker_theoretical_probs();
        for k in 0..5 {
            let se = (probs[k] * (1.0 - probs[k]) / freqs.hands as f64).sqrt();
            assert!(
                (freqs.frequencies[k] - probs[k]).abs() < 4.0 * se,
                "{}: {} vs {}",
                POKER_LABELS[k],
                freqs.frequencies[k],
                probs[k]
            );
        }
    }

    #[test]
    fn raw_torus_p2_is_degenerate_all_different() {
        // consecutive values are 0.414 apart mod 1, so the four digits of a
        // hand can never collide
        let mut t = Torus::new(2).unwrap();
        let u = t.take(4_000).unwrap();
        let (freqs, report) = poker_test(&u, 0.05).unwrap();
        assert_eq!(freqs.counts[4], freqs.hands);
        assert_eq!(freqs.frequencies[4], 1.0);
        assert!(!report.passed());
    }

    #[test]
    fn merging_kicks_in_only_below_expected_count_one() {
        // 400 uniforms = 100 hands: expected four-of-a-kind count is 0.1,
        // so the rare cell merges and the report says so
        let mut g = Lcg::minstd(5).unwrap();
        let u = g.take(400).unwrap();
        let (_, report) = poker_test(&u, 0.05).unwrap();
        assert!(!report.details.notes.is_empty());
        let cats = report.details.categories.unwrap();
        assert!(cats.len() < 5);
        assert!(cats[0].label.contains('+'));

        // 4000 uniforms = 1000 hands: expected count is exactly 1, no merge
        let mut g = Lcg::minstd(5).unwrap();
        let u = g.take(4_000).unwrap();
        let (_, report) = poker_test(&u, 0.05).unwrap();
        assert!(report.details.notes.is_empty());
        assert_eq!(report.details.categories.unwrap().len(), 5);
    }

    #[test]
    fn too_few_values_is_an_error() {
        assert!(matches!(
            poker_test(&[0.1, 0.2, 0.3], 0.05),
            Err(Error::SampleTooSmall { .. })
        ));
    }
}
