//! Event-driven simulation of pulse-coupled networks.

mod presets;
mod sim;
mod topology;

pub use presets::{run_preset, Preset};
pub use sim::{
    EventKind, EventTrace, OscillatorConfig, SimEvent, Simulation, Snapshot, MAX_EVENTS,
};
pub use topology::{Edge, NetworkTopology, DELAY_CAP};

use crate::error::Result;
use crate::interaction::InteractionFunction;

/// Simulates `topology` from the given initial conditions for `duration`
/// time units, sampling phases every `sample_interval`.
pub fn run<F: InteractionFunction>(
    topology: NetworkTopology,
    oscillators: &[OscillatorConfig],
    f: F,
    duration: f64,
    sample_interval: f64,
) -> Result<EventTrace> {
    Simulation::new(topology, oscillators, f)?.run(duration, sample_interval)
}

/// Chronological `(time, oscillator)` firings of a trace.
pub fn firing_sequence(trace: &EventTrace) -> Vec<(f64, usize)> {
    trace.firings()
}
