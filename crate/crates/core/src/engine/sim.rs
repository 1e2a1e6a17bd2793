//! Exact event-driven integration.
//!
//! Phases are piecewise linear in time, so nothing is integrated numerically.
//! Each oscillator keeps an anchor `(t_a, x_a)` set at its last perturbation
//! and a count of threshold crossings since then; its phase at time `t` is
//! `x_a + w (t - t_a) - laps` and its next firing is at
//! `t_a + (1 - x_a + laps) / w`. Unperturbed clocks therefore fire at exactly
//! computed times with no accumulated drift.
//!
//! Simultaneous events are ordered by kind (deliveries before firings), then
//! by oscillator index (source, then target, for deliveries), then by the
//! order in which they were scheduled.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use super::topology::NetworkTopology;
use crate::error::{Error, Result};
use crate::interaction::InteractionFunction;
use crate::phase::Phase;

/// Hard cap on processed events per simulation.
pub const MAX_EVENTS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorConfig {
    /// Cycles per unit time.
    pub frequency: f64,
    pub initial_phase: Phase,
}

impl OscillatorConfig {
    pub fn new(frequency: f64, initial_phase: Phase) -> Self {
        Self {
            frequency,
            initial_phase,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    Firing { oscillator: usize },
    Delivery { source: usize, target: usize },
}

impl EventKind {
    fn tiebreak(&self) -> (u8, usize, usize) {
        match *self {
            EventKind::Delivery { source, target } => (0, source, target),
            EventKind::Firing { oscillator } => (1, oscillator, 0),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EventKind::Firing { .. } => "firing",
            EventKind::Delivery { .. } => "delivery",
        }
    }

    /// The oscillator whose phase the event changes.
    pub fn subject(&self) -> usize {
        match *self {
            EventKind::Firing { oscillator } => oscillator,
            EventKind::Delivery { target, .. } => target,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimEvent {
    pub time: f64,
    pub kind: EventKind,
    /// Position in processing order.
    pub sequence: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub time: f64,
    pub phases: Vec<Phase>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventTrace {
    pub oscillators: usize,
    pub duration: f64,
    pub sample_interval: f64,
    pub events: Vec<SimEvent>,
    pub snapshots: Vec<Snapshot>,
}

impl EventTrace {
    /// Chronological `(time, oscillator)` pairs of firing events.
    pub fn firings(&self) -> Vec<(f64, usize)> {
        self.events
            .iter()
            .filter_map(|e| match e.kind {
                EventKind::Firing { oscillator } => Some((e.time, oscillator)),
                EventKind::Delivery { .. } => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Clock {
    frequency: f64,
    anchor_time: f64,
    anchor_phase: f64,
    laps: u64,
    version: u64,
}

impl Clock {
    fn phase_at(&self, t: f64) -> f64 {
        let x = self.anchor_phase + self.frequency * (t - self.anchor_time) - self.laps as f64;
        x.clamp(0.0, 1.0)
    }

    fn next_firing(&self) -> f64 {
        self.anchor_time + (1.0 - self.anchor_phase + self.laps as f64) / self.frequency
    }

    fn reanchor(&mut self, t: f64, phase: f64) {
        self.anchor_time = t;
        self.anchor_phase = phase;
        self.laps = 0;
        self.version += 1;
    }
}

#[derive(Debug, Clone, Copy)]
struct Pending {
    time: f64,
    kind: EventKind,
    /// Clock version a firing was computed from; stale firings are skipped.
    version: u64,
    seq: u64,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then_with(|| self.kind.tiebreak().cmp(&other.kind.tiebreak()))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

/// A running network of pulse-coupled oscillators.
pub struct Simulation<F> {
    f: F,
    topology: NetworkTopology,
    clocks: Vec<Clock>,
    queue: BinaryHeap<Reverse<Pending>>,
    now: f64,
    scheduled: u64,
    processed: u64,
    max_events: u64,
}

impl<F: InteractionFunction> Simulation<F> {
    pub fn new(topology: NetworkTopology, oscillators: &[OscillatorConfig], f: F) -> Result<Self> {
        if oscillators.is_empty() {
            return Err(Error::invalid("no oscillators to simulate"));
        }
        if oscillators.len() != topology.oscillators() {
            return Err(Error::invalid(format!(
                "{} oscillator configs for a topology of {}",
                oscillators.len(),
                topology.oscillators()
            )));
        }
        if let Some((i, o)) = oscillators
            .iter()
            .enumerate()
            .find(|(_, o)| !o.frequency.is_finite() || o.frequency <= 0.0)
        {
            return Err(Error::invalid(format!(
                "oscillator {i} has frequency {}, must be finite and > 0",
                o.frequency
            )));
        }
        let clocks = oscillators
            .iter()
            .map(|o| Clock {
                frequency: o.frequency,
                anchor_time: 0.0,
                anchor_phase: o.initial_phase.value(),
                laps: 0,
                version: 0,
            })
            .collect();
        let mut sim = Self {
            f,
            topology,
            clocks,
            queue: BinaryHeap::new(),
            now: 0.0,
            scheduled: 0,
            processed: 0,
            max_events: MAX_EVENTS,
        };
        for i in 0..sim.clocks.len() {
            sim.schedule_firing(i);
        }
        Ok(sim)
    }

    /// Lowers the event cap, mainly for tests of the storm guard.
    pub fn with_max_events(mut self, max_events: u64) -> Self {
        self.max_events = max_events;
        self
    }

    pub fn time(&self) -> f64 {
        self.now
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    pub fn oscillators(&self) -> usize {
        self.clocks.len()
    }

    /// Phase of oscillator `i` at time `t >= self.time()`, assuming no event
    /// intervenes.
    pub fn phase_at(&self, i: usize, t: f64) -> f64 {
        self.clocks[i].phase_at(t)
    }

    pub fn phases_at(&self, t: f64) -> Vec<f64> {
        self.clocks.iter().map(|c| c.phase_at(t)).collect()
    }

    fn push(&mut self, time: f64, kind: EventKind, version: u64) {
        let seq = self.scheduled;
        self.scheduled += 1;
        self.queue.push(Reverse(Pending {
            time,
            kind,
            version,
            seq,
        }));
    }

    fn schedule_firing(&mut self, i: usize) {
        let clock = &self.clocks[i];
        let (t, v) = (clock.next_firing(), clock.version);
        self.push(t, EventKind::Firing { oscillator: i }, v);
    }

    fn is_stale(&self, p: &Pending) -> bool {
        match p.kind {
            EventKind::Firing { oscillator } => self.clocks[oscillator].version != p.version,
            EventKind::Delivery { .. } => false,
        }
    }

    /// Next live event without processing it.
    pub fn peek(&mut self) -> Option<(f64, EventKind)> {
        while let Some(Reverse(p)) = self.queue.peek() {
            if self.is_stale(p) {
                self.queue.pop();
            } else {
                return Some((p.time, p.kind));
            }
        }
        None
    }

    /// Processes the next event.
    pub fn step(&mut self) -> Result<Option<SimEvent>> {
        if self.peek().is_none() {
            return Ok(None);
        }
        if self.processed >= self.max_events {
            return Err(Error::ResourceLimit(format!(
                "event storm: more than {} events processed",
                self.max_events
            )));
        }
        let Reverse(p) = self.queue.pop().expect("peeked a live event");
        self.now = p.time;
        match p.kind {
            EventKind::Firing { oscillator } => self.fire(oscillator, p.time),
            EventKind::Delivery { target, .. } => self.deliver(target, p.time),
        }
        let event = SimEvent {
            time: p.time,
            kind: p.kind,
            sequence: self.processed,
        };
        self.processed += 1;
        Ok(Some(event))
    }

    fn fire(&mut self, i: usize, t: f64) {
        self.clocks[i].laps += 1;
        self.schedule_firing(i);
        for k in 0..self.topology.neighbors(i).len() {
            let (j, delay) = self.topology.neighbors(i)[k];
            self.push(t + delay, EventKind::Delivery { source: i, target: j }, 0);
        }
    }

    fn deliver(&mut self, j: usize, t: f64) {
        let x = self.clocks[j].phase_at(t);
        let y = self.f.lift(x);
        // a reset that reaches threshold fires at the same instant
        let phase = if y >= 1.0 { 1.0 } else { Phase::wrap(y).value() };
        self.clocks[j].reanchor(t, phase);
        self.schedule_firing(j);
    }

    /// Runs until `duration`, sampling every phase at `k * sample_interval`.
    ///
    /// Events scheduled exactly at a sample time are processed before the
    /// sample is taken.
    pub fn run(&mut self, duration: f64, sample_interval: f64) -> Result<EventTrace> {
        if !duration.is_finite() || duration <= 0.0 {
            return Err(Error::invalid(format!("duration must be > 0, got {duration}")));
        }
        if !sample_interval.is_finite() || sample_interval <= 0.0 {
            return Err(Error::invalid(format!(
                "sample interval must be > 0, got {sample_interval}"
            )));
        }
        let last_sample = (duration / sample_interval + 1e-9).floor() as u64;
        let mut k = 0u64;
        let mut events = Vec::new();
        let mut snapshots = Vec::with_capacity(last_sample as usize + 1);
        let snapshot = |sim: &Self, s: f64| Snapshot {
            time: s,
            phases: sim.clocks.iter().map(|c| Phase::wrap(c.phase_at(s))).collect(),
        };

        loop {
            let horizon = match self.peek() {
                Some((t, _)) if t <= duration => t,
                _ => break,
            };
            while k <= last_sample && (k as f64) * sample_interval < horizon {
                snapshots.push(snapshot(self, k as f64 * sample_interval));
                k += 1;
            }
            if let Some(e) = self.step()? {
                events.push(e);
            }
        }
        while k <= last_sample {
            snapshots.push(snapshot(self, k as f64 * sample_interval));
            k += 1;
        }
        Ok(EventTrace {
            oscillators: self.clocks.len(),
            duration,
            sample_interval,
            events,
            snapshots,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interaction::SmoothLog;

    fn unit(x: f64) -> OscillatorConfig {
        OscillatorConfig::new(1.0, Phase::wrap(x))
    }

    #[test]
    fn single_clock_fires_on_the_integers() {
        let f = SmoothLog::new(2.0).unwrap();
        let mut sim = Simulation::new(NetworkTopology::complete(1), &[unit(0.0)], f).unwrap();
        let trace = sim.run(5.0, 0.5).unwrap();
        let times: Vec<f64> = trace.firings().iter().map(|&(t, _)| t).collect();
        assert_eq!(times, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(trace.snapshots.len(), 11);
        assert_eq!(trace.snapshots[3].phases[0].value(), 0.5);
        // sample at t = 2 is taken after the firing at t = 2
        assert_eq!(trace.snapshots[4].phases[0].value(), 0.0);
    }

    #[test]
    fn deliveries_precede_firings_at_equal_times() {
        let a = Pending {
            time: 1.0,
            kind: EventKind::Firing { oscillator: 0 },
            version: 0,
            seq: 0,
        };
        let b = Pending {
            time: 1.0,
            kind: EventKind::Delivery { source: 3, target: 4 },
            version: 0,
            seq: 9,
        };
        assert!(b < a);
        let c = Pending {
            time: 1.0,
            kind: EventKind::Delivery { source: 1, target: 4 },
            version: 0,
            seq: 10,
        };
        assert!(c < b);
    }

    #[test]
    fn zero_delay_pulse_lands_before_anything_else_moves() {
        let f = SmoothLog::new(2.0).unwrap();
        let mut sim = Simulation::new(NetworkTopology::complete(2), &[unit(0.9), unit(0.4)], f)
            .unwrap();
        let first = sim.step().unwrap().unwrap();
        assert_eq!(first.kind, EventKind::Firing { oscillator: 0 });
        let second = sim.step().unwrap().unwrap();
        assert_eq!(second.kind, EventKind::Delivery { source: 0, target: 1 });
        assert_eq!(second.time, first.time);
        let expected = f.lift(0.4 + 0.1);
        assert!((sim.phase_at(1, sim.time()) - expected).abs() < 1e-15);
    }

    #[test]
    fn simultaneous_firing_chains_within_the_instant() {
        // identical phases: 0 fires, its pulse pushes 1 (already at threshold) to fire too
        let f = SmoothLog::new(2.0).unwrap();
        let mut sim = Simulation::new(NetworkTopology::complete(2), &[unit(0.5), unit(0.5)], f)
            .unwrap();
        let trace = sim.run(0.6, 0.1).unwrap();
        let kinds: Vec<_> = trace.events.iter().map(|e| (e.time, e.kind)).collect();
        assert_eq!(kinds[0], (0.5, EventKind::Firing { oscillator: 0 }));
        assert_eq!(kinds[1], (0.5, EventKind::Delivery { source: 0, target: 1 }));
        assert_eq!(kinds[2], (0.5, EventKind::Firing { oscillator: 1 }));
        assert_eq!(kinds[3], (0.5, EventKind::Delivery { source: 1, target: 0 }));
    }

    #[test]
    fn storm_guard_trips() {
        let f = SmoothLog::new(2.0).unwrap();
        let mut sim = Simulation::new(NetworkTopology::complete(3), &[unit(0.1), unit(0.2), unit(0.3)], f)
            .unwrap()
            .with_max_events(10);
        assert!(matches!(sim.run(100.0, 1.0), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn construction_checks() {
        let f = SmoothLog::new(2.0).unwrap();
        assert!(Simulation::new(NetworkTopology::complete(0), &[], f).is_err());
        assert!(Simulation::new(NetworkTopology::complete(2), &[unit(0.0)], f).is_err());
        let bad = [unit(0.0), OscillatorConfig::new(0.0, Phase::ZERO)];
        assert!(Simulation::new(NetworkTopology::complete(2), &bad, f).is_err());
        let mut sim = Simulation::new(NetworkTopology::complete(1), &[unit(0.0)], f).unwrap();
        assert!(sim.run(0.0, 0.1).is_err());
        assert!(sim.run(1.0, 0.0).is_err());
    }
}
