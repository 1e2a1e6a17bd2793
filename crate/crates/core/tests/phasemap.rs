use proptest::prelude::*;
use pulse_desync::interaction::{classify_fixed_points, Stability};
use pulse_desync::phasemap::{
    apply_g, build_cyclic_transform, return_map_two, DifferenceState, FiringStep,
};
use pulse_desync::{InteractionFunction, ShiftedCubic, SmoothLog};

/// The smooth log curve evaluated straight from its closed form.
fn smooth_log_oracle(x: f64, g: f64) -> f64 {
    (((g.exp() - 1.0) * x).ln_1p() - (((-g).exp() - 1.0) * x).ln_1p()) / (2.0 * g)
}

fn ordered_state() -> impl Strategy<Value = Vec<f64>> {
    (2usize..8).prop_flat_map(|n| {
        prop::collection::btree_set(1u32..10_000, n - 1).prop_map(|set| {
            set.into_iter().map(|k| f64::from(k) / 10_000.0).collect()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn smooth_log_matches_closed_form(x in 0.0f64..=1.0, g in 0.1f64..6.0) {
        let f = SmoothLog::new(g).unwrap();
        prop_assert!((f.lift(x) - smooth_log_oracle(x, g)).abs() < 1e-12);
    }

    #[test]
    fn smooth_log_is_an_odd_symmetric_increasing_map(x in 0.0f64..0.999, g in 0.1f64..6.0) {
        let f = SmoothLog::new(g).unwrap();
        prop_assert!(f.lift(x + 1e-3) > f.lift(x));
        // f(1 - x) = 1 - f(x)
        prop_assert!((f.lift(1.0 - x) - (1.0 - f.lift(x))).abs() < 1e-12);
    }

    #[test]
    fn cubic_lift_has_degree_one(tau in 0.01f64..0.3, beta in 0.3f64..0.95) {
        let Ok(f) = ShiftedCubic::new(tau, beta) else { return Ok(()) };
        prop_assert!((f.lift(1.0) - f.lift(0.0) - 1.0).abs() < 1e-12);
        prop_assert!((f.lift(0.5) - 0.5).abs() < 1e-12);
        prop_assert!((f.derivative(0.5) - beta).abs() < 1e-12);
    }

    #[test]
    fn firing_step_preserves_ordering(d in ordered_state()) {
        let f = SmoothLog::new(2.0).unwrap();
        let n = d.len() + 1;
        let state = DifferenceState::new(d).unwrap();
        let next = FiringStep::new(n).unwrap().step(&state, &f).unwrap();
        prop_assert!(next.check_ordering().is_ok(), "{} -> {}", state, next);
    }

    #[test]
    fn relabelling_has_order_n(d in ordered_state()) {
        let n = d.len() + 1;
        let t = build_cyclic_transform(n).unwrap();
        let mut v = d.clone();
        for _ in 0..n {
            v = t.apply(&v);
        }
        for (a, b) in v.iter().zip(&d) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn g_acts_componentwise(d in ordered_state()) {
        let f = SmoothLog::new(2.0).unwrap();
        let state = DifferenceState::new(d.clone()).unwrap();
        let g = apply_g(&state, &f).unwrap();
        for (gk, dk) in g.as_slice().iter().zip(&d) {
            prop_assert!((gk + smooth_log_oracle(1.0 - dk, 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn return_map_alternates_sign(d in -0.999f64..0.999) {
        prop_assume!(d != 0.0);
        let f = SmoothLog::new(2.0).unwrap();
        let next = return_map_two(d, &f).unwrap();
        prop_assert!(next * d < 0.0);
        let twice = return_map_two(next, &f).unwrap();
        prop_assert!((twice.abs() - 0.5).abs() <= (d.abs() - 0.5).abs() + 1e-15);
    }
}

#[test]
fn cubic_fixed_points_are_frozen() {
    let f = ShiftedCubic::new(0.1, 0.5).unwrap();
    let reports = classify_fixed_points(&f);
    assert_eq!(reports.len(), 2);
    let unstable = reports.iter().find(|r| r.stability == Stability::Unstable).unwrap();
    let stable = reports.iter().find(|r| r.stability == Stability::Stable).unwrap();
    assert!((unstable.location.value() - 0.0901).abs() < 1e-4);
    assert!((stable.location.value() - 0.5).abs() < 1e-12);
    assert!((stable.multiplier - 0.5).abs() < 1e-12);
}

#[test]
fn return_map_fixed_point_pair() {
    let f = SmoothLog::new(2.0).unwrap();
    assert_eq!(return_map_two(0.5, &f).unwrap(), -0.5);
    assert_eq!(return_map_two(-0.5, &f).unwrap(), 0.5);
    assert_eq!(return_map_two(0.0, &f).unwrap(), 0.0);
    assert!(return_map_two(-1.0, &f).is_err());
}
