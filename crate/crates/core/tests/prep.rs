use naq_core::prep::{prepare_register, PrepError};
use naq_core::rng::{stream, Stream};
use naq_core::HardwareProfile;

#[test]
fn mean_attempts_follow_the_geometric_law() {
    let p = HardwareProfile::rb87_2023();
    let trials = 20_000u64;
    let attempts: Vec<f64> = (0..trials)
        .map(|i| {
            let mut rng = stream(5, Stream::Prep, i);
            prepare_register(&p, 25, 200, &mut rng).unwrap().attempts as f64
        })
        .collect();
    let mean = attempts.iter().sum::<f64>() / trials as f64;
    let success = p.transfer_success.powi(25);
    let expected = 1.0 / success;
    let se = ((1.0 - success) / (success * success) / trials as f64).sqrt();
    assert!((expected - 1.35).abs() < 0.01);
    assert!(
        (mean - expected).abs() < 3.0 * se,
        "{mean} vs {expected} ± {se}"
    );
}

#[test]
fn every_attempt_costs_a_preparation_cycle() {
    let p = HardwareProfile::rb87_2023();
    for i in 0..200 {
        let out = prepare_register(&p, 16, 50, &mut stream(6, Stream::Prep, i)).unwrap();
        assert!(out.defect_free);
        assert!(out.elapsed >= p.prep_time() * out.attempts as u32);
    }
}

#[test]
fn oversized_register_is_rejected() {
    let p = HardwareProfile::rb87_2023();
    let err = prepare_register(&p, 101, 0, &mut stream(0, Stream::Prep, 0)).unwrap_err();
    assert!(matches!(
        err,
        PrepError::ExceedsCapacity { requested: 101, .. }
    ));
}
