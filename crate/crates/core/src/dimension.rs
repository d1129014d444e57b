//! Profile-likelihood elbow selection of the embedding dimension.
//!
//! For each split point `d` the sorted singular values are modelled as two
//! Gaussian samples, the leading `d` values and the trailing `K - d`, with
//! separate means and one pooled variance. The chosen dimension maximises
//! the summed log-likelihood.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::svd::SingularSpectrum;

/// Pooled variance is never allowed below this multiple of the squared
/// largest value, so constant groups keep finite log-likelihoods.
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub d_hat: usize,
    /// Entry `d - 1` holds the profile log-likelihood of split `d`, for `d` in `1..K`.
    pub profile_loglik: Vec<f64>,
    pub k_used: usize,
}

impl DimensionEstimate {
    pub fn loglik_at(&self, d: usize) -> Option<f64> {
        d.checked_sub(1)
            .and_then(|i| self.profile_loglik.get(i).copied())
    }
}

pub fn estimate_dimension(spectrum: &SingularSpectrum) -> Result<DimensionEstimate> {
    let profile = profile_loglik(spectrum.values())?;
    // First maximum wins: ties go to the smaller dimension.
    let mut best = 0;
    for (i, &ll) in profile.iter().enumerate() {
        if ll > profile[best] {
            best = i;
        }
    }
    Ok(DimensionEstimate {
        d_hat: best + 1,
        profile_loglik: profile,
        k_used: spectrum.len(),
    })
}

/// Profile log-likelihood of every split `d = 1..K-1` of descending `values`.
pub fn profile_loglik(values: &[f64]) -> Result<Vec<f64>> {
    let k = values.len();
    if k < 3 {
        return Err(Error::param(
            "spectrum",
            format!("the elbow needs at least 3 singular values, got {k}"),
        ));
    }
    let top = values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let floor = (VARIANCE_FLOOR * top * top).max(f64::MIN_POSITIVE);
    let kf = k as f64;
    Ok((1..k)
        .map(|d| {
            let ss = sum_sq_dev(&values[..d]) + sum_sq_dev(&values[d..]);
            let var = (ss / kf).max(floor);
            -0.5 * kf * (2.0 * std::f64::consts::PI * var).ln() - ss / (2.0 * var)
        })
        .collect())
}

fn sum_sq_dev(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(v: &[f64]) -> SingularSpectrum {
        SingularSpectrum::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn clear_split() {
        let e = estimate_dimension(&spectrum(&[10., 10., 10., 1., 1., 1., 1.])).unwrap();
        assert_eq!(e.d_hat, 3);
        assert_eq!(e.profile_loglik.len(), 6);
        assert_eq!(e.k_used, 7);
    }

    #[test]
    fn too_short() {
        assert!(estimate_dimension(&spectrum(&[3., 1.])).is_err());
    }

    #[test]
    fn constant_spectrum_is_finite_and_picks_one() {
        let e = estimate_dimension(&spectrum(&[2.; 5])).unwrap();
        assert!(e.profile_loglik.iter().all(|l| l.is_finite()));
        assert_eq!(e.d_hat, 1);
        let z = estimate_dimension(&spectrum(&[0.; 5])).unwrap();
        assert_eq!(z.d_hat, 1);
    }

    #[test]
    fn scaling_keeps_the_argmax() {
        let base = [9.0, 7.5, 7.1, 3.0, 2.9, 2.0, 1.1, 0.4];
        let d = estimate_dimension(&spectrum(&base)).unwrap().d_hat;
        for c in [1e-3, 0.5, 1e3] {
            let scaled: Vec<f64> = base.iter().map(|x| x * c).collect();
            assert_eq!(estimate_dimension(&spectrum(&scaled)).unwrap().d_hat, d);
        }
    }
}
