mod common;

use common::*;
use naq_core::circuit::{lower_to_native, parse_circuit};
use naq_core::lattice::build_connectivity;
use naq_core::rng::from_seed;
use naq_core::sim::{ideal_distribution, StateVector};
use naq_core::transpile::{
    audit_schedule, route, schedule, transpile, Placement, RoutingMode, SwapCost, TranspileError,
    TranspileOptions,
};
use naq_core::HardwareProfile;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn radius(r: f64) -> HardwareProfile {
    let mut p = HardwareProfile::rb87_2023();
    p.blockade_radius_sites = r;
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lowering_preserves_the_unitary(seed in any::<u64>(), n in 1usize..=4, len in 1usize..16) {
        let c = random_circuit(&mut from_seed(seed), n, len, &ALL_KINDS);
        let lowered = lower_to_native(&c);
        prop_assert!(lowered.is_native());
        let d = phase_distance(&circuit_unitary(&lowered), &circuit_unitary(&c));
        prop_assert!(d < 1e-9, "distance {d}");
    }

    #[test]
    fn state_vector_matches_dense_oracle(seed in any::<u64>(), n in 1usize..=4, len in 1usize..16) {
        let c = random_circuit(&mut from_seed(seed), n, len, &ALL_KINDS);
        let u = circuit_unitary(&c);
        let s = StateVector::simulate(&c);
        for (i, a) in s.amplitudes().iter().enumerate() {
            prop_assert!((a - u[(i, 0)]).norm() < 1e-10);
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transpiled_distribution_matches(seed in any::<u64>(), n in 1usize..=4, len in 1usize..12) {
        let c = random_circuit(&mut from_seed(seed), n, len, &ALL_KINDS);
        let tr = transpile(&c, &HardwareProfile::rb87_2023(), TranspileOptions::default()).unwrap();
        let got = ideal_distribution(&tr.schedule);
        let want = distribution(&circuit_unitary(&c));
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn swap_routing_on_a_line_is_equivalent(seed in any::<u64>(), n in 2usize..=4, len in 1usize..12) {
        let mut rng = from_seed(seed);
        let c = random_circuit(&mut rng, n, len, &PAIR_KINDS);
        let p = radius(1.0);
        let g = build_connectivity(&p, &p.lattice.block(0, 0, 1, n)).unwrap();
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.shuffle(&mut rng);
        let routed = route(&lower_to_native(&c), &Placement { nodes }, &g, RoutingMode::Swap).unwrap();
        let s = schedule(&routed, &g, &p, SwapCost::Native);
        prop_assert!(audit_schedule(&s).is_ok());
        let want = permutation(&s.output_permutation, n) * circuit_unitary(&c);
        prop_assert!(phase_distance(&schedule_unitary(&s), &want) < 1e-9);
    }

    #[test]
    fn shuttle_routing_is_equivalent(seed in any::<u64>(), n in 2usize..=3, len in 1usize..12) {
        let mut rng = from_seed(seed);
        let c = random_circuit(&mut rng, n, len, &ALL_KINDS);
        let p = radius(1.5);
        let g = build_connectivity(&p, &p.lattice.block(0, 0, 3, 3)).unwrap();
        let mut nodes: Vec<usize> = (0..g.len()).collect();
        nodes.shuffle(&mut rng);
        nodes.truncate(n);
        let routed = route(&lower_to_native(&c), &Placement { nodes }, &g, RoutingMode::Shuttle).unwrap();
        let s = schedule(&routed, &g, &p, SwapCost::Native);
        prop_assert!(audit_schedule(&s).is_ok());
        let want = permutation(&s.output_permutation, n) * circuit_unitary(&c);
        prop_assert!(phase_distance(&schedule_unitary(&s), &want) < 1e-9);
    }

    #[test]
    fn gathering_swaps_are_equivalent(seed in any::<u64>(), len in 1usize..10) {
        let mut rng = from_seed(seed);
        let c = random_circuit(&mut rng, 6, len, &ALL_KINDS);
        let p = radius(1.5);
        let g = build_connectivity(&p, &p.lattice.block(0, 0, 2, 3)).unwrap();
        let mut nodes: Vec<usize> = (0..6).collect();
        nodes.shuffle(&mut rng);
        let routed = match route(&lower_to_native(&c), &Placement { nodes }, &g, RoutingMode::Swap) {
            Ok(r) => r,
            Err(TranspileError::NoClique { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let s = schedule(&routed, &g, &p, SwapCost::Native);
        prop_assert!(audit_schedule(&s).is_ok());
        let want = permutation(&s.output_permutation, 6) * circuit_unitary(&c);
        prop_assert!(phase_distance(&schedule_unitary(&s), &want) < 1e-9);
    }

    #[test]
    fn three_cz_swaps_are_equivalent(seed in any::<u64>(), len in 1usize..10) {
        let mut rng = from_seed(seed);
        let c = random_circuit(&mut rng, 3, len, &PAIR_KINDS);
        let p = radius(1.0);
        let g = build_connectivity(&p, &p.lattice.block(0, 0, 1, 3)).unwrap();
        let routed = route(&lower_to_native(&c), &Placement::identity(3), &g, RoutingMode::Swap).unwrap();
        let s = schedule(&routed, &g, &p, SwapCost::ThreeCz);
        prop_assert!(audit_schedule(&s).is_ok());
        let want = permutation(&s.output_permutation, 3) * circuit_unitary(&c);
        prop_assert!(phase_distance(&schedule_unitary(&s), &want) < 1e-9);
    }

    #[test]
    fn shot_time_covers_prep_and_readout(seed in any::<u64>(), n in 1usize..=4, len in 0usize..12) {
        let p = HardwareProfile::rb87_2023();
        let c = random_circuit(&mut from_seed(seed), n, len, &ALL_KINDS);
        let t = transpile(&c, &p, TranspileOptions::default()).unwrap().timing(&p, 10);
        prop_assert!(t.t_shot >= t.t_prep + t.t_readout);
        prop_assert_eq!(t.t_total, t.t_shot * 10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn adding_edges_never_adds_swaps(
        seed in any::<u64>(),
        geometry in prop::sample::select(vec![(1usize, 6usize, 1.0, 2.0), (2, 3, 1.0, 1.5), (2, 3, 1.5, 2.0), (3, 3, 1.0, 1.5), (3, 3, 1.5, 2.0)]),
        len in 1usize..16,
    ) {
        let (rows, cols, narrow, wide) = geometry;
        let n = rows * cols;
        let region = radius(narrow).lattice.block(0, 0, rows, cols);
        let g_narrow = build_connectivity(&radius(narrow), &region).unwrap();
        let g_wide = build_connectivity(&radius(wide), &region).unwrap();
        let mut rng = from_seed(seed);
        let c = lower_to_native(&random_circuit(&mut rng, n, len, &ALL_KINDS));
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.shuffle(&mut rng);
        let placement = Placement { nodes };
        match route(&c, &placement, &g_narrow, RoutingMode::Swap) {
            Ok(a) => {
                let b = route(&c, &placement, &g_wide, RoutingMode::Swap).unwrap();
                prop_assert!(b.swaps_inserted <= a.swaps_inserted, "{} > {}", b.swaps_inserted, a.swaps_inserted);
            }
            Err(TranspileError::NoClique { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn bell_text_roundtrip_and_oracle() {
    let c = parse_circuit("qubits 2\nh 0\ncnot 0 1\nmeasure all").unwrap();
    let d = distribution(&circuit_unitary(&c));
    assert!((d[0] - 0.5).abs() < 1e-12 && (d[3] - 0.5).abs() < 1e-12);
    assert_eq!(parse_circuit(&c.to_text()).unwrap(), c);
}
