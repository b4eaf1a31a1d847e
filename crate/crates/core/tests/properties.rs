use std::f64::consts::PI;

use proptest::prelude::*;
use pulsekick_core::{delta_propagate, p12_delta, transition_probability, ComplexScalar, Coupling, SuperpositionState};

fn state() -> impl Strategy<Value = SuperpositionState> {
    (0.0..1.0f64, -PI..PI, -PI..PI).prop_map(|(w, p1, p2)| {
        let a1 = ComplexScalar::from_polar(w.sqrt(), p1);
        let a2 = ComplexScalar::from_polar((1.0 - w).sqrt(), p2);
        SuperpositionState::new(a1, a2).unwrap()
    })
}

fn coupling() -> impl Strategy<Value = Coupling> {
    (0.0..20.0f64, -PI..PI).prop_map(|(m, p)| Coupling::from_polar(m, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn unitary(s in state(), k in coupling()) {
        let out = delta_propagate(&s, &k).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negated_coupling_inverts(s in state(), k in coupling()) {
        let there = delta_propagate(&s, &k).unwrap();
        let back = delta_propagate(&there, &(-k)).unwrap();
        prop_assert!(back.max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn additive_at_fixed_phase(s in state(), m1 in 0.0..6.0f64, m2 in 0.0..6.0f64, phase in -PI..PI) {
        let k1 = Coupling::from_polar(m1, phase).unwrap();
        let k2 = Coupling::from_polar(m2, phase).unwrap();
        let k12 = Coupling::from_polar(m1 + m2, phase).unwrap();
        let two = delta_propagate(&delta_propagate(&s, &k1).unwrap(), &k2).unwrap();
        let one = delta_propagate(&s, &k12).unwrap();
        prop_assert!(two.max_abs_diff(&one) < 1e-12);
    }

    #[test]
    fn probability_has_period_pi(s in state(), m in 0.0..10.0f64, phase in -PI..PI) {
        let p = transition_probability(&s, &Coupling::from_polar(m, phase).unwrap()).unwrap();
        let q = transition_probability(&s, &Coupling::from_polar(m + PI, phase).unwrap()).unwrap();
        prop_assert!((p - q).abs() < 1e-12);
    }

    #[test]
    fn global_phase_invariant(s in state(), k in coupling(), g in -PI..PI) {
        let p = transition_probability(&s, &k).unwrap();
        let q = transition_probability(&s.with_global_phase(g), &k).unwrap();
        prop_assert!((p - q).abs() < 1e-12);
    }

    #[test]
    fn ground_state_probability_is_sin_squared(k in coupling()) {
        let p = transition_probability(&SuperpositionState::ground(), &k).unwrap();
        prop_assert!((p - p12_delta(&k)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&p));
    }
}
