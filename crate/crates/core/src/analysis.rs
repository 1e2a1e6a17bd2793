//! Coherence and desynchronization diagnostics computed from recorded traces.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::engine::{EventTrace, NetworkTopology};
use crate::error::{Error, Result};
use crate::phase::{wrapped_distance, Phase};
use crate::phasemap::orbits::canonical_cyclic_order;

/// Fraction of the trace, counted from the end, used for asymptotic diagnostics.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.2;

/// Absolute tolerance on inter-firing intervals when looking for a repeating pattern.
pub const DEFAULT_CYCLE_TOLERANCE: f64 = 1e-6;

/// Firing-time gaps at or below this are treated as simultaneous.
const SIMULTANEITY: f64 = 1e-12;

/// Magnitude of the mean unit phasor.
pub fn order_parameter(phases: &[Phase]) -> Result<f64> {
    if phases.is_empty() {
        return Err(Error::invalid("order parameter of an empty phase vector"));
    }
    // summing in sorted order makes the result independent of labelling
    let mut xs: Vec<f64> = phases.iter().map(|p| p.value()).collect();
    xs.sort_by(f64::total_cmp);
    let (s, c) = xs.iter().fold((0.0, 0.0), |(s, c), x| {
        let (ps, pc) = (TAU * x).sin_cos();
        (s + ps, c + pc)
    });
    Ok((s.hypot(c) / phases.len() as f64).min(1.0))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OrderParameterSeries {
    /// `(t, P)` at every snapshot.
    pub rows: Vec<(f64, f64)>,
}

impl OrderParameterSeries {
    /// Mean of `P` over rows with `t >= start`, or `None` if there are none.
    pub fn mean_since(&self, start: f64) -> Option<f64> {
        let tail: Vec<f64> = self
            .rows
            .iter()
            .filter(|(t, _)| *t >= start)
            .map(|&(_, p)| p)
            .collect();
        (!tail.is_empty()).then(|| tail.iter().sum::<f64>() / tail.len() as f64)
    }

    /// First time at which `P` drops below `level` and stays there.
    pub fn settles_below(&self, level: f64) -> Option<f64> {
        let last_above = self.rows.iter().rposition(|&(_, p)| p >= level);
        match last_above {
            None => self.rows.first().map(|r| r.0),
            Some(i) => self.rows.get(i + 1).map(|r| r.0),
        }
    }
}

pub fn order_parameter_series(trace: &EventTrace) -> OrderParameterSeries {
    let rows = trace
        .snapshots
        .iter()
        .filter(|s| !s.phases.is_empty())
        .map(|s| (s.time, order_parameter(&s.phases).expect("nonempty snapshot")))
        .collect();
    OrderParameterSeries { rows }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCycleReport {
    pub period: f64,
    /// Oscillator indices (0-based) in firing order over one period, rotated
    /// so the smallest comes first.
    pub order: Vec<usize>,
    /// Number of firings per period.
    pub pattern_length: usize,
}

/// Finds the shortest cyclic pattern of oscillator ids whose inter-firing
/// intervals repeat to within `tolerance` across the whole sequence.
///
/// Needs at least three firings per distinct oscillator and at least three
/// repetitions of the pattern; returns `None` otherwise or when nothing repeats.
pub fn detect_limit_cycle(firings: &[(f64, usize)], tolerance: f64) -> Option<LimitCycleReport> {
    let mut ids: Vec<usize> = firings.iter().map(|&(_, i)| i).collect();
    ids.sort_unstable();
    ids.dedup();
    let n = ids.len();
    let len = firings.len();
    if n == 0 || len < 3 * n {
        return None;
    }
    let gaps: Vec<f64> = firings.windows(2).map(|w| w[1].0 - w[0].0).collect();
    (1..=len / 3).find_map(|l| {
        let ids_repeat = (0..len - l).all(|i| firings[i].1 == firings[i + l].1);
        let gaps_repeat = (0..gaps.len().saturating_sub(l))
            .all(|i| (gaps[i] - gaps[i + l]).abs() <= tolerance);
        (ids_repeat && gaps_repeat).then(|| {
            let tail: Vec<usize> = firings[len - l..].iter().map(|&(_, i)| i).collect();
            LimitCycleReport {
                period: firings[len - 1].0 - firings[len - 1 - l].0,
                order: canonical_cyclic_order(&tail),
                pattern_length: l,
            }
        })
    })
}

/// Minimum wrapped distance for an edge whose busier endpoint has `degree` links.
pub fn desync_threshold(degree: usize) -> f64 {
    1.0 / (2.0 * (degree + 1).max(2) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeVerdict {
    pub a: usize,
    pub b: usize,
    /// Mean wrapped phase distance at the endpoints' firing instants.
    pub distance: f64,
    pub threshold: f64,
    pub alternating: bool,
    pub desynchronized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesyncVerdict {
    pub window_start: f64,
    pub window_end: f64,
    pub edges: Vec<EdgeVerdict>,
    pub converged: bool,
    pub limit_cycle: Option<LimitCycleReport>,
    /// Cyclic order held by every oscillator throughout the window, if any.
    pub firing_order: Option<Vec<usize>>,
    pub diagnostics: Vec<String>,
}

impl DesyncVerdict {
    pub fn all_desynchronized(&self) -> bool {
        !self.edges.is_empty() && self.edges.iter().all(|e| e.desynchronized)
    }
}

/// The cyclic order of firings when all `n` oscillators fire in the same
/// order round after round, rotated so the smallest index comes first.
pub fn stable_firing_order(firings: &[(f64, usize)], n: usize) -> Option<Vec<usize>> {
    if n == 0 || firings.len() < 2 * n {
        return None;
    }
    let first: Vec<usize> = firings[..n].iter().map(|&(_, i)| i).collect();
    let mut sorted = first.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return None;
    }
    let repeats = (0..firings.len() - n).all(|i| firings[i].1 == firings[i + n].1);
    repeats.then(|| canonical_cyclic_order(&first))
}

/// Phase of an oscillator at time `t` read off its own firing times: the
/// elapsed fraction of the inter-firing interval containing `t`.
fn event_phase(own: &[f64], t: f64) -> Option<f64> {
    let next = own.partition_point(|&s| s <= t + SIMULTANEITY);
    if next == 0 || next == own.len() {
        return None;
    }
    let (t0, t1) = (own[next - 1], own[next]);
    Some(((t - t0) / (t1 - t0)).max(0.0))
}

fn edge_distance(a: &[f64], b: &[f64], window_start: f64) -> Option<f64> {
    let samples: Vec<f64> = a
        .iter()
        .filter(|&&t| t >= window_start)
        .filter_map(|&t| event_phase(b, t))
        .chain(
            b.iter()
                .filter(|&&t| t >= window_start)
                .filter_map(|&t| event_phase(a, t)),
        )
        .map(wrapped_distance)
        .collect();
    (!samples.is_empty()).then(|| samples.iter().sum::<f64>() / samples.len() as f64)
}

fn strictly_alternating(merged: &[(f64, usize)]) -> bool {
    merged.len() >= 2
        && merged
            .windows(2)
            .all(|w| w[0].1 != w[1].1 && w[1].0 - w[0].0 > SIMULTANEITY)
}

/// Per-edge desynchronization over the final `window` time units of `trace`.
///
/// An edge counts as desynchronized when its endpoints fire strictly in turn
/// and their mean wrapped distance, sampled whenever either endpoint fires,
/// is at least [`desync_threshold`] of the larger endpoint degree. The trace
/// counts as converged when the window's firing sequence is periodic to
/// within `cycle_tolerance`.
pub fn local_desync(
    trace: &EventTrace,
    topology: &NetworkTopology,
    window: f64,
    cycle_tolerance: f64,
) -> Result<DesyncVerdict> {
    if !(window > 0.0 && window < trace.duration) {
        return Err(Error::invalid(format!(
            "analysis window {window} must lie in (0, {})",
            trace.duration
        )));
    }
    if topology.oscillators() != trace.oscillators {
        return Err(Error::invalid(format!(
            "topology has {} oscillators, trace has {}",
            topology.oscillators(),
            trace.oscillators
        )));
    }
    let window_start = trace.duration - window;
    let firings = trace.firings();
    let mut own: Vec<Vec<f64>> = vec![Vec::new(); trace.oscillators];
    for &(t, i) in &firings {
        own[i].push(t);
    }
    let tail: Vec<(f64, usize)> = firings
        .iter()
        .copied()
        .filter(|&(t, _)| t >= window_start)
        .collect();

    let mut diagnostics = Vec::new();
    let limit_cycle = detect_limit_cycle(&tail, cycle_tolerance);
    if limit_cycle.is_none() {
        diagnostics.push(format!(
            "no repeating firing pattern among {} firings after t = {window_start}",
            tail.len()
        ));
    }

    let firing_order = stable_firing_order(&tail, trace.oscillators);
    if firing_order.is_none() {
        diagnostics.push("firing order changes within the window".to_string());
    }

    let edges = topology
        .edges()
        .iter()
        .map(|e| {
            let threshold = desync_threshold(topology.degree(e.a).max(topology.degree(e.b)));
            let merged: Vec<(f64, usize)> = tail
                .iter()
                .copied()
                .filter(|&(_, i)| i == e.a || i == e.b)
                .collect();
            let both_fire = merged.iter().any(|&(_, i)| i == e.a) && merged.iter().any(|&(_, i)| i == e.b);
            let alternating = both_fire && strictly_alternating(&merged);
            let distance = edge_distance(&own[e.a], &own[e.b], window_start).unwrap_or_else(|| {
                diagnostics.push(format!(
                    "edge {}-{}: too few firings to measure a distance",
                    e.a + 1,
                    e.b + 1
                ));
                0.0
            });
            EdgeVerdict {
                a: e.a,
                b: e.b,
                distance,
                threshold,
                alternating,
                desynchronized: alternating && distance >= threshold,
            }
        })
        .collect();

    Ok(DesyncVerdict {
        window_start,
        window_end: trace.duration,
        edges,
        converged: limit_cycle.is_some(),
        limit_cycle,
        firing_order,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{EventKind, SimEvent};

    fn phases(xs: &[f64]) -> Vec<Phase> {
        xs.iter().map(|&x| Phase::wrap(x)).collect()
    }

    /// Firings of `ids` in turn with constant spacing `gap`.
    fn periodic_firings(ids: &[usize], gap: f64, repeats: usize, start: f64) -> Vec<(f64, usize)> {
        (0..repeats * ids.len())
            .map(|k| (start + k as f64 * gap, ids[k % ids.len()]))
            .collect()
    }

    fn trace_from_firings(n: usize, firings: &[(f64, usize)], duration: f64) -> EventTrace {
        EventTrace {
            oscillators: n,
            duration,
            sample_interval: 1.0,
            events: firings
                .iter()
                .enumerate()
                .map(|(k, &(time, oscillator))| SimEvent {
                    time,
                    kind: EventKind::Firing { oscillator },
                    sequence: k as u64,
                })
                .collect(),
            snapshots: Vec::new(),
        }
    }

    #[test]
    fn order_parameter_cases() {
        assert!((order_parameter(&phases(&[0.3; 4])).unwrap() - 1.0).abs() < 1e-15);
        assert!(order_parameter(&phases(&[0.0, 0.5])).unwrap() < 1e-15);
        assert!(order_parameter(&phases(&[0.0, 0.25, 0.5, 0.75])).unwrap() < 1e-15);
        let splay: Vec<f64> = (0..5).map(|k| k as f64 / 5.0).collect();
        assert!(order_parameter(&phases(&splay)).unwrap() <= 1e-12);
        assert_eq!(order_parameter(&phases(&[0.7])).unwrap(), 1.0);
        assert!(order_parameter(&[]).is_err());
    }

    #[test]
    fn series_helpers() {
        let s = OrderParameterSeries {
            rows: vec![(0.0, 1.0), (1.0, 0.5), (2.0, 0.01), (3.0, 0.02)],
        };
        assert_eq!(s.mean_since(2.0), Some(0.015));
        assert_eq!(s.mean_since(9.0), None);
        assert_eq!(s.settles_below(0.1), Some(2.0));
        assert_eq!(s.settles_below(0.001), None);
    }

    #[test]
    fn recovers_synthetic_cycle_exactly() {
        let firings = periodic_firings(&[3, 0, 4, 1, 2], 0.2, 6, 10.0);
        let lc = detect_limit_cycle(&firings, 1e-9).unwrap();
        assert_eq!(lc.pattern_length, 5);
        assert_eq!(lc.order, vec![0, 4, 1, 2, 3]);
        assert!((lc.period - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_oscillator_cycle() {
        let firings = periodic_firings(&[0], 0.5, 4, 0.5);
        let lc = detect_limit_cycle(&firings, 1e-9).unwrap();
        assert_eq!(lc.order, vec![0]);
        assert_eq!(lc.period, 0.5);
    }

    #[test]
    fn transient_has_no_cycle() {
        let mut t = 0.0;
        let firings: Vec<(f64, usize)> = (0..12)
            .map(|k| {
                t += 0.3 + 0.01 * k as f64;
                (t, k % 2)
            })
            .collect();
        assert!(detect_limit_cycle(&firings, 1e-6).is_none());
        assert!(detect_limit_cycle(&firings[..5], 1e-6).is_none());
    }

    #[test]
    fn antiphase_pair_is_desynchronized() {
        let firings = periodic_firings(&[0, 1], 0.5, 40, 0.5);
        let trace = trace_from_firings(2, &firings, 40.0);
        let v = local_desync(&trace, &NetworkTopology::complete(2), 8.0, 1e-9).unwrap();
        assert!(v.converged);
        assert!(v.all_desynchronized());
        assert!((v.edges[0].distance - 0.5).abs() < 1e-12);
        assert!(v.edges[0].alternating);
    }

    #[test]
    fn synchronized_pair_is_not() {
        let firings: Vec<(f64, usize)> = (1..=40).flat_map(|k| [(k as f64, 0), (k as f64, 1)]).collect();
        let trace = trace_from_firings(2, &firings, 40.5);
        let v = local_desync(&trace, &NetworkTopology::complete(2), 8.0, 1e-9).unwrap();
        assert_eq!(v.edges[0].distance, 0.0);
        assert!(!v.edges[0].alternating);
        assert!(!v.all_desynchronized());
    }

    #[test]
    fn window_must_fit() {
        let trace = trace_from_firings(2, &periodic_firings(&[0, 1], 0.5, 4, 0.5), 4.0);
        let k2 = NetworkTopology::complete(2);
        assert!(local_desync(&trace, &k2, 4.0, 1e-9).is_err());
        assert!(local_desync(&trace, &k2, 0.0, 1e-9).is_err());
        let v = local_desync(&trace, &k2, 1.0, 1e-9).unwrap();
        assert!(!v.converged);
        assert!(!v.diagnostics.is_empty());
    }

    #[test]
    fn firing_order_stability() {
        let steady = periodic_firings(&[2, 0, 1], 0.3, 5, 0.0);
        assert_eq!(stable_firing_order(&steady, 3), Some(vec![0, 1, 2]));
        let mut swapped = steady.clone();
        swapped.swap(7, 8);
        assert_eq!(stable_firing_order(&swapped, 3), None);
        assert_eq!(stable_firing_order(&steady[..5], 3), None);
        let missing = periodic_firings(&[0, 1, 0], 0.3, 4, 0.0);
        assert_eq!(stable_firing_order(&missing, 3), None);
    }

    #[test]
    fn thresholds() {
        assert_eq!(desync_threshold(0), 0.25);
        assert_eq!(desync_threshold(1), 0.25);
        assert_eq!(desync_threshold(2), 1.0 / 6.0);
        assert_eq!(desync_threshold(4), 0.1);
    }
}
