//! The four five-oscillator desynchronization experiments.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interaction::InteractionSpec;
use crate::scenario::{
    AnalysisOptions, DelaySpec, FrequencySpec, OscillatorSpec, PhaseSpec, ScenarioConfig,
    ScenarioRun, TopologySpec, SCHEMA_VERSION,
};

pub const PRESET_SEED: u64 = 42;
pub const PRESET_OSCILLATORS: usize = 5;
/// Width of the near-synchronous initial spread.
pub const PRESET_SPREAD: f64 = 0.01;
pub const PRESET_DURATION: f64 = 200.0;
pub const PRESET_SAMPLE_INTERVAL: f64 = 0.01;
pub const PRESET_DELAY: f64 = 0.01;
/// Upper bound on the fastest-to-slowest frequency ratio in heterogeneous presets.
pub const PRESET_MAX_RATIO: f64 = 1.11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Identical clocks, smooth log coupling, no delay.
    Fig5a,
    /// Normally distributed periods, smooth log coupling, no delay.
    Fig5b,
    /// Identical clocks, shifted cubic coupling, uniform delay.
    Fig5c,
    /// Normally distributed periods, shifted cubic coupling, uniform delay.
    Fig5d,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig5a, Preset::Fig5b, Preset::Fig5c, Preset::Fig5d];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig5c => "fig5c",
            Preset::Fig5d => "fig5d",
        }
    }

    pub fn heterogeneous(self) -> bool {
        matches!(self, Preset::Fig5b | Preset::Fig5d)
    }

    pub fn delayed(self) -> bool {
        matches!(self, Preset::Fig5c | Preset::Fig5d)
    }

    pub fn config(self) -> ScenarioConfig {
        let frequencies = if self.heterogeneous() {
            FrequencySpec::NormalPeriod {
                mean: 1.0,
                sd: 0.05,
                max_ratio: Some(PRESET_MAX_RATIO),
            }
        } else {
            FrequencySpec::Constant(1.0)
        };
        let (interaction, delay) = if self.delayed() {
            (InteractionSpec::ShiftedCubic { tau: 0.01, beta: 0.5 }, PRESET_DELAY)
        } else {
            (InteractionSpec::SmoothLog { gain: 2.0 }, 0.0)
        };
        ScenarioConfig {
            schema: SCHEMA_VERSION,
            seed: PRESET_SEED,
            topology: TopologySpec::Complete {
                n: PRESET_OSCILLATORS,
            },
            oscillators: OscillatorSpec {
                frequencies,
                initial_phases: PhaseSpec::Uniform {
                    low: 0.0,
                    high: PRESET_SPREAD,
                },
            },
            interaction,
            delays: DelaySpec::Uniform(delay),
            duration: PRESET_DURATION,
            sample_interval: PRESET_SAMPLE_INTERVAL,
            analysis: AnalysisOptions::default(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!("unknown preset `{s}`; expected fig5a, fig5b, fig5c or fig5d"))
            })
    }
}

/// Runs a preset and its diagnostics.
pub fn run_preset(preset: Preset) -> Result<ScenarioRun> {
    preset.config().resolve()?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            assert!(p.config().resolve().is_ok());
        }
        assert!("fig5e".parse::<Preset>().is_err());
    }
}
