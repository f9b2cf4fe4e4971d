use crate::error::{Error, Result};

/// Empirical autocorrelations rho_h for h = 1..=max_lag:
///
///   rho_h = sum_{k=1}^{n-h} (u_k - m)(u_{k+h} - m) / sum_{k=1}^{n} (u_k - m)^2
///
/// with m the sample mean. The numerator runs over the n - h available
/// pairs while the denominator keeps all n terms, the standard
/// positive-semidefinite normalization. Under independence rho_h is
/// O(1/sqrt(n)); structural sequences show persistent spikes.
pub fn correlogram(seq: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if max_lag == 0 {
        return Err(Error::SampleTooSmall { need: 1, got: 0 });
    }
    if seq.len() <= max_lag {
        return Err(Error::SampleTooSmall {
            need: max_lag + 1,
            got: seq.len(),
        });
    }
    let n = seq.len();
    let mean = seq.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = seq.iter().map(|x| x - mean).collect();
    let denom: f64 = centered.iter().map(|d| d * d).sum();
    if denom == 0.0 {
        return Err(Error::ConstantSample);
    }
    let mut rho = Vec::with_capacity(max_lag);
    for h in 1..=max_lag {
        let num: f64 = centered[..n - h]
            .iter()
            .zip(&centered[h..])
            .map(|(a, b)| a * b)
            .sum();
        rho.push(num / denom);
    }
    Ok(rho)
}
