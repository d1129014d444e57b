mod common;

use common::{arithmetic_entropy, brute_force_elbow};
use polardim::dimension::profile_loglik;
use polardim::{estimate_dimension, svd_entropy, SingularSpectrum};
use proptest::collection::vec;
use proptest::prelude::*;

fn spectrum(values: &[f64]) -> SingularSpectrum {
    SingularSpectrum::from_values(values.to_vec()).unwrap()
}

fn spectra() -> impl Strategy<Value = Vec<f64>> {
    vec(0.0f64..100.0, 3..80).prop_filter("some mass", |v| v.iter().any(|&x| x > 1e-6))
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

#[test]
fn three_strong_directions() {
    let values = [10.0, 10.0, 10.0, 1.0, 1.0, 1.0, 1.0];
    let est = estimate_dimension(&spectrum(&values)).unwrap();
    assert_eq!(est.d_hat, 3);
    assert_eq!(brute_force_elbow(&values), 3);
}

#[test]
fn profile_matches_gaussian_log_density_sum() {
    let values = [9.0, 7.5, 3.0, 2.0, 1.5, 0.2];
    let ll = profile_loglik(&values).unwrap();
    assert_eq!(ll.len(), 5);
    let best = ll
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| {
            if v > acc.1 {
                (i + 1, v)
            } else {
                acc
            }
        });
    assert_eq!(best.0, brute_force_elbow(&values));
}

#[test]
fn entropy_anchors() {
    assert_eq!(
        svd_entropy(&spectrum(&[1.0, 1.0, 1.0, 1.0]))
            .unwrap()
            .entropy,
        1.0
    );
    assert_eq!(
        svd_entropy(&spectrum(&[7.0, 0.0, 0.0])).unwrap().entropy,
        0.0
    );
    let j = svd_entropy(&spectrum(&[2.0, 1.0, 1.0])).unwrap().entropy;
    assert!((j - arithmetic_entropy(&[2.0, 1.0, 1.0])).abs() < 1e-12);
    assert!((j - 0.946395).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn entropy_stays_in_unit_interval(v in spectra()) {
        let j = svd_entropy(&spectrum(&v)).unwrap().entropy;
        prop_assert!((0.0..=1.0).contains(&j));
        prop_assert!((j - arithmetic_entropy(&v).clamp(0.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn entropy_ignores_scale(v in spectra(), c in prop_oneof![Just(1e-3), Just(1.0), Just(1e3)]) {
        let j = svd_entropy(&spectrum(&v)).unwrap().entropy;
        let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
        let js = svd_entropy(&spectrum(&scaled)).unwrap().entropy;
        prop_assert!((j - js).abs() < 1e-12);
    }

    #[test]
    fn elbow_matches_exhaustive_search(v in spectra()) {
        let v = sorted(v);
        let est = estimate_dimension(&spectrum(&v)).unwrap();
        prop_assert_eq!(est.d_hat, brute_force_elbow(&v));
        prop_assert!(est.d_hat >= 1 && est.d_hat < v.len());
    }

    #[test]
    fn elbow_ignores_scale(v in spectra(), c in prop_oneof![Just(1e-3), Just(1.0), Just(1e3)]) {
        let d = estimate_dimension(&spectrum(&v)).unwrap().d_hat;
        let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
        prop_assert_eq!(estimate_dimension(&spectrum(&scaled)).unwrap().d_hat, d);
    }
}
