//! Closed-form scattering and multi-wave interference invariants.

use std::f64::consts::PI;

use dbtunnel_core::interference::{
    decompose, partial_waves, reflection_by_interference, transmission_by_interference, Terms,
};
use dbtunnel_core::quantum::{
    double_barrier_solution, double_barrier_wavefunction, single_barrier_solution, verify_flux_conservation,
};
use dbtunnel_core::{Barrier, DoubleBarrier, Kinematics, UnitSystem};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_5ca7),
        failure_persistence: None,
        ..Config::default()
    }
}

fn units() -> UnitSystem {
    UnitSystem::tabulated()
}

/// A valid double barrier and a wave number inside its tunneling window.
fn case() -> impl Strategy<Value = (DoubleBarrier, f64)> {
    (
        1.0..30.0f64,
        0.05..3.0f64,
        1.0..30.0f64,
        0.05..3.0f64,
        0.0..15.0f64,
        0.01..0.99f64,
    )
        .prop_map(|(a1, l1, a2, l2, d, frac)| {
            let db = DoubleBarrier::from_parts(a1, l1, a2, l2, d).unwrap();
            let k = frac * db.tunneling_ceiling(&units());
            (db, k)
        })
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn flux_is_conserved((db, k) in case()) {
        let sol = double_barrier_solution(&units(), k, &db).unwrap();
        let flux = verify_flux_conservation(&sol);
        prop_assert!(flux.unitarity.abs() <= 1e-12, "{}", flux.unitarity);
        prop_assert!(flux.interior.unwrap().abs() <= 1e-12);
    }

    #[test]
    fn swapping_barriers_keeps_the_rate((db, k) in case()) {
        let u = units();
        let t = double_barrier_solution(&u, k, &db).unwrap().transmission_rate();
        let s = double_barrier_solution(&u, k, &db.swapped()).unwrap().transmission_rate();
        prop_assert!((t - s).abs() <= 1e-12);
    }

    #[test]
    fn wavefunction_is_continuous((db, k) in case()) {
        let u = units();
        for x in db.interfaces() {
            // regions are closed on the right, so `x` itself is the left limit
            let right = if x == 0.0 { 1e-14 } else { x * (1.0 + 4.0 * f64::EPSILON) };
            let (p0, d0) = double_barrier_wavefunction(&u, k, &db, x).unwrap();
            let (p1, d1) = double_barrier_wavefunction(&u, k, &db, right).unwrap();
            prop_assert!((p0 - p1).norm() <= 1e-10 * p0.norm().max(1.0), "psi at {x}");
            prop_assert!((d0 - d1).norm() <= 1e-10 * d0.norm().max(1.0), "psi' at {x}");
        }
    }

    #[test]
    fn kinematic_identity((db, k) in case()) {
        for b in [db.first, db.second] {
            let kin = Kinematics::new(&units(), k, b.height()).unwrap();
            // stored M and K each carry ~ε·M rounding, so no f64 pair beats ε·M²
            let floor = 1e-12f64.max(4.0 * f64::EPSILON * kin.m * kin.m);
            prop_assert!(kin.identity_residual().abs() <= floor, "M = {}", kin.m);
        }
    }

    #[test]
    fn closing_the_gap_gives_a_doubled_barrier(a in 1.0..30.0f64, l in 0.05..3.0f64, frac in 0.01..0.99f64) {
        let u = units();
        let merged = DoubleBarrier::symmetric(a, l, 0.0).unwrap();
        let k = frac * merged.tunneling_ceiling(&u);
        let t = double_barrier_solution(&u, k, &merged).unwrap();
        let s = single_barrier_solution(&u, k, &Barrier::new(a, 2.0 * l).unwrap()).unwrap();
        prop_assert!((t.transmission - s.transmission).norm() <= 1e-10 * s.transmission.norm());
        prop_assert!((t.reflection - s.reflection).norm() <= 1e-10);
    }

    #[test]
    fn interference_sum_equals_closed_form((db, k) in case()) {
        let u = units();
        let sol = double_barrier_solution(&u, k, &db).unwrap();
        let t = transmission_by_interference(&u, k, &db, Terms::Closed).unwrap();
        let r = reflection_by_interference(&u, k, &db).unwrap();
        prop_assert!((t - sol.transmission).norm() <= 1e-12, "{:e}", (t - sol.transmission).norm());
        prop_assert!((r - sol.reflection).norm() <= 1e-12, "{:e}", (r - sol.reflection).norm());
    }

    #[test]
    fn truncated_sum_obeys_the_geometric_bound((db, k) in case(), n in 1usize..40) {
        let u = units();
        let p1 = decompose(&u, k, &db.first).unwrap();
        let p2 = decompose(&u, k, &db.second).unwrap();
        let rr = p1.reflection * p2.reflection;
        let bound = p1.transmission * p2.transmission * rr.powi(n as i32) / (1.0 - rr);
        let closed = transmission_by_interference(&u, k, &db, Terms::Closed).unwrap();
        let partial = transmission_by_interference(&u, k, &db, Terms::Series(n)).unwrap();
        prop_assert!((closed - partial).norm() <= bound * (1.0 + 1e-9) + 1e-15);
    }

    #[test]
    fn transmitted_and_reflected_phases_differ_by_pi((db, k) in case()) {
        let u = units();
        let p1 = decompose(&u, k, &db.first).unwrap();
        let p2 = decompose(&u, k, &db.second).unwrap();
        let span = k * u.reduced_length(db.first.length() + db.second.length());
        let lhs = p1.phase_t + p2.phase_t - p1.phase_r - p2.phase_r + span;
        prop_assert!((lhs - PI).abs() <= 1e-12);
    }

    #[test]
    fn single_barrier_conserves_flux(a in 0.5..40.0f64, l in 0.0..4.0f64, frac in 0.01..0.99f64) {
        let u = units();
        let b = Barrier::new(a, l).unwrap();
        let k = frac * u.tunneling_ceiling(a);
        let s = single_barrier_solution(&u, k, &b).unwrap();
        prop_assert!((s.transmission_rate() + s.reflection_rate() - 1.0).abs() <= 1e-12);
        let p = decompose(&u, k, &b).unwrap();
        prop_assert!((p.transmission * p.transmission + p.reflection * p.reflection - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn partial_waves_sum_to_the_closed_form() {
    let u = units();
    let db = DoubleBarrier::from_parts(4.0, 0.4, 6.0, 0.3, 5.0).unwrap();
    let k = 0.9;
    let waves = partial_waves(&u, k, &db, 400).unwrap();
    let span = k * u.reduced_length(db.total_length());
    let sum: dbtunnel_core::Complex64 = waves.iter().sum();
    let closed = transmission_by_interference(&u, k, &db, Terms::Closed).unwrap();
    // raw partial waves carry the e^{ikL} the closed form removes
    let removed = sum * dbtunnel_core::Complex64::from_polar(1.0, -span);
    assert!((removed - closed).norm() < 1e-12, "{}", (removed - closed).norm());
    // successive waves shrink by the round-trip factor R₁R₂
    let ratio = waves[1].norm() / waves[0].norm();
    let p1 = decompose(&u, k, &db.first).unwrap();
    let p2 = decompose(&u, k, &db.second).unwrap();
    assert!((ratio - p1.reflection * p2.reflection).abs() < 1e-12);
}

#[test]
fn zero_length_barriers_are_transparent() {
    let u = units();
    let db = DoubleBarrier::from_parts(10.0, 0.0, 7.0, 0.0, 5.0).unwrap();
    for i in 1..50 {
        let k = 0.05 * i as f64;
        let s = double_barrier_solution(&u, k, &db).unwrap();
        assert!((s.transmission_rate() - 1.0).abs() < 1e-14);
        assert!(s.reflection.norm() < 1e-14);
    }
}
