use polardim_web::{sbm_sample, spectrum_summary};

#[test]
fn sample_has_one_position_per_node() {
    let s = sbm_sample(120, 0.25, 0.4, 0.05, 50, 3).unwrap();
    assert_eq!(s.positions.len(), 120);
    assert_eq!(s.membership.len(), 120);
    assert_eq!(s.block_sizes, [30, 90]);
    assert_eq!(s.spectrum.values.len(), 50);
    assert!(s.spectrum.d_hat >= 1);
}

#[test]
fn sample_is_reproducible() {
    let a = serde_json::to_string(&sbm_sample(80, 0.5, 0.3, 0.1, 20, 9).unwrap()).unwrap();
    let b = serde_json::to_string(&sbm_sample(80, 0.5, 0.3, 0.1, 20, 9).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn summary_of_three_strong_values() {
    let s = spectrum_summary(vec![10.0, 10.0, 10.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
    assert_eq!(s.d_hat, 3);
    assert_eq!(s.profile_loglik.len(), 6);
}

#[test]
fn bad_inputs_are_errors() {
    assert!(spectrum_summary(vec![1.0]).is_err());
    assert!(sbm_sample(100, 0.7, 0.3, 0.1, 20, 0).is_err());
}
