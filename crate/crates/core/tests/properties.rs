use nalgebra::{Rotation3, Vector3};
use num_complex::Complex64;
use proptest::prelude::*;

use phondeq::{
    gamma_general, wootters_concurrence, PhaseMode, PseudoSpin, QubitSpec, RegisterState, SystemGeometry,
    TwoQubitAmplitudes, TwoQubitSystem, Vec3, ONE_EXCITATION, TWO_EXCITATION,
};

fn vec3() -> impl Strategy<Value = Vec3> {
    (-30.0..30.0f64, -30.0..30.0f64, -30.0..30.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn axis() -> impl Strategy<Value = Vec3> {
    vec3().prop_filter("non-zero axis", |v| v.norm() > 0.5)
}

fn radius() -> impl Strategy<Value = f64> {
    0.5..2.0f64
}

fn qubit() -> impl Strategy<Value = QubitSpec> {
    (vec3(), axis(), radius(), radius()).prop_map(|(c, d, a, b)| QubitSpec::with_radii(c, d, a, b).unwrap())
}

fn geometry() -> impl Strategy<Value = SystemGeometry> {
    (qubit(), qubit()).prop_map(|(a, b)| SystemGeometry::two_qubits(a, b))
}

fn amplitudes() -> impl Strategy<Value = TwoQubitAmplitudes> {
    prop::array::uniform4((-1.0..1.0f64, -1.0..1.0f64))
        .prop_filter("non-zero state", |a| a.iter().map(|(x, y)| x * x + y * y).sum::<f64>() > 1e-3)
        .prop_map(|a| {
            let norm = a.iter().map(|(x, y)| x * x + y * y).sum::<f64>().sqrt();
            TwoQubitAmplitudes::new(a.map(|(x, y)| Complex64::new(x / norm, y / norm))).unwrap()
        })
}

fn rotate(r: &Rotation3<f64>, v: Vec3) -> Vec3 {
    let w = r * Vector3::new(v.x, v.y, v.z);
    Vec3::new(w.x, w.y, w.z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distances_are_symmetric(g in geometry()) {
        for b in 0..2 {
            for b2 in 0..2 {
                for m in PseudoSpin::BOTH {
                    for s in PseudoSpin::BOTH {
                        prop_assert_eq!(g.inter_donor_distance(b, m, b2, s), g.inter_donor_distance(b2, s, b, m));
                    }
                }
            }
        }
    }

    #[test]
    fn distance_table_is_rigid_motion_invariant(
        g in geometry(),
        shift in vec3(),
        (rx, ry, rz) in (-3.2..3.2f64, -3.2..3.2f64, -3.2..3.2f64),
    ) {
        let rot = Rotation3::from_euler_angles(rx, ry, rz);
        let moved = g.qubits().iter().map(|q| {
            QubitSpec::with_radii(rotate(&rot, q.center()) + shift, rotate(&rot, q.axis()), q.bohr_radius(PseudoSpin::Down), q.bohr_radius(PseudoSpin::Up)).unwrap()
        }).collect::<Vec<_>>();
        let moved = SystemGeometry::new(moved).unwrap();
        for (a, b) in g.distance_table().iter().zip(moved.distance_table()) {
            prop_assert!((a.length - b.length).abs() < 1e-12, "{} vs {}", a.length, b.length);
        }
    }

    #[test]
    fn gamma_general_symmetric_in_radii(t in 0.0..60.0f64, a in 0.3..3.0f64, a2 in 0.3..3.0f64, l in 0.0..40.0f64) {
        let x = gamma_general(t, a, a2, l).unwrap();
        let y = gamma_general(t, a2, a, l).unwrap();
        prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "{} vs {}", x, y);
    }

    #[test]
    fn gamma_general_vanishes_at_zero_time(a in 0.3..3.0f64, a2 in 0.3..3.0f64, l in 0.0..40.0f64) {
        prop_assert!(gamma_general(0.0, a, a2, l).unwrap().abs() < 1e-14);
    }

    #[test]
    fn concurrence_temperature_power_law(g in geometry(), t in 0.0..40.0f64, p in 0.05..0.95f64, ratio in 0.001..0.2f64, alpha in 0.1..10.0f64) {
        let sys = TwoQubitSystem::new(g).unwrap();
        let amp = 2.0 * (p * (1.0 - p)).sqrt();
        let base = sys.concurrence_two_excitation(t, p, ratio).unwrap() / amp;
        let scaled = sys.concurrence_two_excitation(t, p, alpha * ratio).unwrap() / amp;
        prop_assert!((scaled - base.powf(alpha)).abs() < 1e-10);
    }

    #[test]
    fn evolved_states_stay_physical(g in geometry(), psi in amplitudes(), t in 0.0..40.0f64, ratio in 0.0..0.5f64) {
        let sys = TwoQubitSystem::new(g).unwrap();
        let rho = sys.evolve_density_matrix(t, &psi, ratio, PhaseMode::Zero).unwrap();
        let m = rho.matrix();
        for (i, state) in RegisterState::BASIS.iter().enumerate() {
            prop_assert!((m[(i, i)].re - psi.amplitude(*state).norm_sqr()).abs() < 1e-12);
        }
        prop_assert!((m - m.adjoint()).iter().all(|z| z.norm() < 1e-12));
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.min_eigenvalue() >= -1e-10);
        let c = wootters_concurrence(&rho);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn sector_concurrence_matches_wootters(g in geometry(), t in 0.0..40.0f64, p in 0.0..=1.0f64, ratio in 0.0..0.3f64, two in any::<bool>()) {
        let sys = TwoQubitSystem::new(g).unwrap();
        let (psi, closed) = if two {
            (TwoQubitAmplitudes::two_excitation(p).unwrap(), sys.concurrence_two_excitation(t, p, ratio).unwrap())
        } else {
            (TwoQubitAmplitudes::one_excitation(p).unwrap(), sys.concurrence_one_excitation(t, p, ratio).unwrap())
        };
        let rho = sys.evolve_density_matrix(t, &psi, ratio, PhaseMode::Zero).unwrap();
        prop_assert!((wootters_concurrence(&rho) - closed).abs() < 1e-10);
    }

    #[test]
    fn exponents_are_non_negative(g in geometry(), t in 0.0..40.0f64) {
        let sys = TwoQubitSystem::new(g).unwrap();
        for (m, s) in [ONE_EXCITATION, TWO_EXCITATION] {
            prop_assert!(sys.rates().integrated_exponent(t, m, s).unwrap() >= -1e-12);
        }
    }
}
