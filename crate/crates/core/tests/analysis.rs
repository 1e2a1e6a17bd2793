use proptest::prelude::*;
use pulse_desync::analysis::{
    desync_threshold, detect_limit_cycle, local_desync, order_parameter, stable_firing_order,
};
use pulse_desync::engine::{run, NetworkTopology, OscillatorConfig};
use pulse_desync::{Phase, SmoothLog};

fn phases(xs: &[f64]) -> Vec<Phase> {
    xs.iter().map(|&x| Phase::wrap(x)).collect()
}

fn periodic(ids: &[usize], gaps: &[f64], repeats: usize) -> Vec<(f64, usize)> {
    let mut t = 0.5;
    let mut out = Vec::new();
    for r in 0..repeats {
        for (k, &i) in ids.iter().enumerate() {
            out.push((t, i));
            t += gaps[(r * ids.len() + k) % gaps.len()];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn order_parameter_ignores_common_rotation(
        xs in prop::collection::vec(0.0f64..1.0, 1..12),
        shift in 0.0f64..1.0,
    ) {
        let p = order_parameter(&phases(&xs)).unwrap();
        let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let q = order_parameter(&phases(&shifted)).unwrap();
        prop_assert!((p - q).abs() < 1e-12, "{} vs {}", p, q);
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn order_parameter_ignores_labelling(
        xs in prop::collection::vec(0.0f64..1.0, 1..12).prop_shuffle(),
    ) {
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assert_eq!(
            order_parameter(&phases(&xs)).unwrap(),
            order_parameter(&phases(&sorted)).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn synthetic_cycles_are_recovered(
        order in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(),
        gaps in prop::collection::vec(0.05f64..0.4, 5),
        repeats in 4usize..10,
    ) {
        let firings = periodic(&order, &gaps, repeats);
        let lc = detect_limit_cycle(&firings, 1e-9).expect("periodic input");
        prop_assert_eq!(lc.pattern_length, 5);
        let expected: f64 = gaps.iter().sum();
        prop_assert!((lc.period - expected).abs() < 1e-12);
        let start = order.iter().position(|&i| i == 0).unwrap();
        let canonical: Vec<usize> = order[start..].iter().chain(&order[..start]).copied().collect();
        prop_assert_eq!(&lc.order, &canonical);
        prop_assert_eq!(stable_firing_order(&firings, 5), Some(canonical));
    }
}

#[test]
fn known_order_parameters() {
    assert!((order_parameter(&phases(&[0.3; 4])).unwrap() - 1.0).abs() < 1e-15);
    assert!(order_parameter(&phases(&[0.0, 0.5])).unwrap() < 1e-15);
    assert!(order_parameter(&phases(&[0.0, 0.25, 0.5, 0.75])).unwrap() < 1e-15);
    assert!(order_parameter(&[]).is_err());
}

#[test]
fn perturbed_cycle_is_rejected() {
    let mut firings = periodic(&[0, 1, 2], &[0.3, 0.3, 0.4], 6);
    firings[10].0 += 1e-3;
    assert!(detect_limit_cycle(&firings, 1e-6).is_none());
}

#[test]
fn threshold_values() {
    assert_eq!(desync_threshold(0), 0.25);
    assert_eq!(desync_threshold(1), 0.25);
    assert_eq!(desync_threshold(2), 1.0 / 6.0);
    assert_eq!(desync_threshold(4), 0.1);
}

#[test]
fn ring_of_six_desynchronizes_locally() {
    let f = SmoothLog::new(2.0).unwrap();
    let starts = [0.0, 0.013, 0.021, 0.034, 0.047, 0.052];
    let oscillators: Vec<_> = starts
        .iter()
        .map(|&x| OscillatorConfig::new(1.0, Phase::new(x).unwrap()))
        .collect();
    let topology = NetworkTopology::ring(6);
    let trace = run(topology.clone(), &oscillators, f, 300.0, 0.1).unwrap();
    let verdict = local_desync(&trace, &topology, 60.0, 1e-6).unwrap();
    assert_eq!(verdict.edges.len(), 6);
    for e in &verdict.edges {
        assert!(e.desynchronized, "edge {}-{}: {e:?}", e.a + 1, e.b + 1);
        assert_eq!(e.threshold, 1.0 / 6.0);
    }
    assert!(verdict.all_desynchronized());
}

#[test]
fn window_outside_trace_is_rejected() {
    let f = SmoothLog::new(2.0).unwrap();
    let oscillators = [OscillatorConfig::new(1.0, Phase::ZERO), OscillatorConfig::new(1.0, Phase::wrap(0.3))];
    let topology = NetworkTopology::complete(2);
    let trace = run(topology.clone(), &oscillators, f, 10.0, 0.1).unwrap();
    assert!(local_desync(&trace, &topology, 10.0, 1e-6).is_err());
    assert!(local_desync(&trace, &topology, 0.0, 1e-6).is_err());
}
