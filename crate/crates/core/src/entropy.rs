use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::svd::SingularSpectrum;

/// Pielou-normalised SVD entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub entropy: f64,
    /// Sum of the singular values used (nuclear norm of the truncated spectrum).
    pub normaliser: f64,
    pub k_used: usize,
}

/// `J = -(ln K)⁻¹ Σ sᵢ ln sᵢ` with `sᵢ = σᵢ / Σⱼ σⱼ` over the `K` supplied values
/// and `0 ln 0 = 0`.
pub fn svd_entropy(spectrum: &SingularSpectrum) -> Result<EntropyReport> {
    let values = spectrum.values();
    let k = values.len();
    if k < 2 {
        return Err(Error::param(
            "spectrum",
            format!("entropy needs at least 2 singular values, got {k}"),
        ));
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Err(Error::UndefinedEntropy(
            "all singular values are zero".into(),
        ));
    }
    let h = values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| {
            let s = v / total;
            -s * s.ln()
        })
        .fold(0.0, |acc, t| acc + t);
    // Rounding can push a uniform spectrum a hair past 1.
    let j = (h / (k as f64).ln()).clamp(0.0, 1.0);
    Ok(EntropyReport {
        entropy: j,
        normaliser: total,
        k_used: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(v: &[f64]) -> Result<f64> {
        svd_entropy(&SingularSpectrum::from_values(v.to_vec()).unwrap()).map(|r| r.entropy)
    }

    #[test]
    fn anchors() {
        assert_eq!(j(&[1., 1., 1., 1.]).unwrap(), 1.0);
        assert_eq!(j(&[7., 0., 0.]).unwrap(), 0.0);
        let expected = -(0.5f64 * 0.5f64.ln() + 0.5 * 0.25f64.ln()) / 3f64.ln();
        assert!((j(&[2., 1., 1.]).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.946395).abs() < 1e-6);
    }

    #[test]
    fn undefined_cases() {
        assert!(matches!(j(&[0., 0., 0.]), Err(Error::UndefinedEntropy(_))));
        assert!(matches!(j(&[3.]), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn normaliser_is_the_sum() {
        let r = svd_entropy(&SingularSpectrum::from_values(vec![3., 2., 1.]).unwrap()).unwrap();
        assert_eq!(r.normaliser, 6.0);
        assert_eq!(r.k_used, 3);
    }
}
