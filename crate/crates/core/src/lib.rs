//! Pulse-coupled phase oscillators that desynchronize through phase resetting.
//!
//! The crate has two views of the same dynamics:
//!
//! * [`phasemap`] reduces identical, instantaneously coupled oscillators to
//!   discrete maps on phase differences (the two-oscillator return map, the
//!   `N`-oscillator cyclic iteration, orbit counting, and the critical
//!   frequency ratio).
//! * [`engine`] integrates arbitrary networks exactly, event by event, with
//!   heterogeneous frequencies and propagation delays.
//!
//! [`analysis`] turns the resulting traces into coherence and
//! desynchronization diagnostics, and [`cli`] wires everything to scenario
//! files and CSV output.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod error;
pub mod interaction;
pub mod output;
pub mod phase;
pub mod phasemap;
pub mod scenario;

pub use error::{Error, Result};
pub use interaction::{
    Interaction, InteractionFunction, InteractionSpec, ShiftedCubic, SmoothLog,
};
pub use phase::Phase;
