mod common;

use common::*;
use naq_core::bench::ghz_circuit;
use naq_core::circuit::parse_circuit;
use naq_core::rng::from_seed;
use naq_core::sim::{
    execute_schedule, idle_decoherence, read_out, run, sample_detunings, NoiseCounts, NoiseFlags,
    NoiseModel, RunConfig, StateVector, C64,
};
use naq_core::transpile::{transpile, TranspileOptions};
use naq_core::HardwareProfile;
use proptest::prelude::*;

fn bell() -> naq_core::Circuit {
    parse_circuit("qubits 2\nh 0\ncnot 0 1\nmeasure all").unwrap()
}

fn config(shots: u64, seed: u64, flags: NoiseFlags) -> RunConfig {
    RunConfig {
        shots,
        seed,
        flags,
        ..RunConfig::default()
    }
}

fn plus() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_amplitudes(vec![C64::new(h, 0.0), C64::new(h, 0.0)])
}

/// Ensemble `(ρ₁₁, ρ₀₁)` over trajectories produced by `f`.
fn ensemble(trials: usize, mut f: impl FnMut() -> StateVector) -> (f64, C64) {
    let mut rho11 = 0.0;
    let mut rho01 = C64::new(0.0, 0.0);
    for _ in 0..trials {
        let s = f();
        let a = s.amplitudes();
        rho11 += a[1].norm_sqr();
        rho01 += a[0] * a[1].conj();
    }
    (rho11 / trials as f64, rho01 / trials as f64)
}

#[test]
fn readout_errors_split_bell_pairs() {
    let mut p = HardwareProfile::rb87_2023();
    p.f_readout = 0.95;
    let r = run(&bell(), &p, &config(10_000, 3, NoiseFlags::readout_only())).unwrap();
    let odd = r.probability("01") + r.probability("10");
    assert!((odd - 0.095).abs() < 0.01, "{odd}");
    assert_eq!(r.histogram.values().sum::<u64>(), 10_000);
}

#[test]
fn ghz5_full_noise_is_degraded_but_useful() {
    let p = HardwareProfile::rb87_2023();
    let r = run(&ghz_circuit(5), &p, &config(4000, 11, NoiseFlags::full())).unwrap();
    let proxy = r.probability("00000") + r.probability("11111");
    assert!(proxy > 0.5 && proxy < 1.0, "{proxy}");
}

#[test]
fn noise_off_is_bit_for_bit_reproducible() {
    let p = HardwareProfile::rb87_2023();
    let c = ghz_circuit(4);
    let a = run(&c, &p, &config(2000, 8, NoiseFlags::off())).unwrap();
    let b = run(&c, &p, &config(2000, 8, NoiseFlags::off())).unwrap();
    assert_eq!(a.histogram, b.histogram);
    assert_eq!(a.noise_events, NoiseCounts::default());
    assert!(a.histogram.keys().all(|k| k == "0000" || k == "1111"));
}

#[test]
fn worker_count_does_not_change_results() {
    let p = HardwareProfile::rb87_2023();
    let c = ghz_circuit(3);
    let mut one = config(1500, 21, NoiseFlags::full());
    one.workers = 1;
    let mut three = one;
    three.workers = 3;
    let a = run(&c, &p, &one).unwrap();
    let b = run(&c, &p, &three).unwrap();
    assert_eq!(a.histogram, b.histogram);
    assert_eq!(a.noise_events, b.noise_events);
    assert_eq!(a.preparation, b.preparation);
}

#[test]
fn lost_atom_reads_one() {
    let p = HardwareProfile::rb87_2023();
    let mut model = NoiseModel::from_profile(&p, NoiseFlags::readout_only());
    model.f_readout = 0.9;
    let mut rng = from_seed(4);
    for _ in 0..500 {
        let mut s = StateVector::simulate(&bell());
        let mut counts = NoiseCounts::default();
        s.mark_lost(0, &mut rng);
        let index = read_out(&s, &model, &mut rng, &mut counts);
        assert_eq!(index & 1, 1);
    }
}

#[test]
fn amplitude_damping_matches_the_channel() {
    let mut model = NoiseModel::from_profile(&HardwareProfile::rb87_2023(), NoiseFlags::off());
    model.flags.amplitude_damping = true;
    let mut rng = from_seed(12);
    let trials = 40_000;
    let (rho11, rho01) = ensemble(trials, || {
        let mut s = plus();
        let mut counts = NoiseCounts::default();
        idle_decoherence(&mut s, 0, model.t1, &model, 0.0, &mut rng, &mut counts);
        s
    });
    let se = (0.25 / trials as f64).sqrt();
    assert!((rho11 - 0.5 * (-1.0f64).exp()).abs() < 4.0 * se, "{rho11}");
    assert!(
        (rho01.re - 0.5 * (-0.5f64).exp()).abs() < 4.0 * se,
        "{rho01}"
    );
}

#[test]
fn static_detuning_gives_gaussian_decay() {
    let mut model = NoiseModel::from_profile(&HardwareProfile::rb87_2023(), NoiseFlags::off());
    model.flags.inhomogeneous = true;
    let mut rng = from_seed(13);
    let trials = 100_000;
    let samples: Vec<f64> = (0..trials)
        .map(|_| {
            let delta = sample_detunings(&model, 1, &mut rng)[0];
            let mut s = plus();
            let mut counts = NoiseCounts::default();
            idle_decoherence(
                &mut s,
                0,
                model.t2_star,
                &model,
                delta,
                &mut rng,
                &mut counts,
            );
            let a = s.amplitudes();
            2.0 * (a[0].conj() * a[1]).re
        })
        .collect();
    let (mean, se) = mean_se(&samples);
    assert!((mean - (-1.0f64).exp()).abs() < 3.0 * se, "{mean} ± {se}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trajectories_stay_normalised(seed in any::<u64>(), n in 1usize..=4, len in 1usize..16) {
        let mut rng = from_seed(seed);
        let c = random_circuit(&mut rng, n, len, &ALL_KINDS);
        let mut p = HardwareProfile::rb87_2023();
        p.f_2q = 0.8;
        p.t1 = 1e-4;
        p.t2 = 5e-5;
        p.trap_lifetime = 1e-4;
        let tr = transpile(&c, &p, TranspileOptions::default()).unwrap();
        let model = NoiseModel::from_profile(&p, NoiseFlags::full());
        let detunings = sample_detunings(&model, tr.schedule.n_atoms, &mut rng);
        let mut s = StateVector::zero(tr.schedule.n_atoms);
        let mut counts = NoiseCounts::default();
        execute_schedule(&tr.schedule, &model, &detunings, &mut s, &mut rng, &mut counts);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn histogram_total_equals_shots(seed in any::<u64>(), shots in 1u64..300) {
        let r = run(&bell(), &HardwareProfile::rb87_2023(), &config(shots, seed, NoiseFlags::full())).unwrap();
        prop_assert_eq!(r.histogram.values().sum::<u64>(), shots);
        prop_assert!(r.histogram.keys().all(|k| k.len() == 2));
    }
}
