//! JSON scenario files: parsing, validation and execution.
//!
//! Oscillator and edge indices in scenario files are 1-based.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    local_desync, order_parameter_series, DesyncVerdict, OrderParameterSeries,
    DEFAULT_CYCLE_TOLERANCE, DEFAULT_WINDOW_FRACTION,
};
use crate::engine::{EventTrace, NetworkTopology, OscillatorConfig, Simulation};
use crate::error::{Error, Result};
use crate::interaction::{Interaction, InteractionSpec};
use crate::phase::Phase;

pub const SCHEMA_VERSION: u32 = 1;

/// Random streams derived from the scenario seed, one per consumer, so that
/// changing one part of a scenario does not reshuffle the others.
pub const STREAM_PHASES: u64 = 1;
pub const STREAM_FREQUENCIES: u64 = 2;
pub const STREAM_TOPOLOGY: u64 = 3;

/// Attempts allowed when rejection-sampling periods.
pub const MAX_FREQUENCY_DRAWS: usize = 10_000;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    Complete {
        n: usize,
    },
    Ring {
        n: usize,
    },
    ErdosRenyi {
        n: usize,
        p: f64,
        /// Defaults to a stream of the scenario seed.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Edges {
        n: usize,
        edges: Vec<[usize; 2]>,
    },
}

impl TopologySpec {
    pub fn oscillators(&self) -> usize {
        match *self {
            TopologySpec::Complete { n }
            | TopologySpec::Ring { n }
            | TopologySpec::ErdosRenyi { n, .. }
            | TopologySpec::Edges { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FrequencySpec {
    Constant(f64),
    List(Vec<f64>),
    /// Periods drawn from a normal distribution; frequencies are their
    /// reciprocals. With `max_ratio`, whole draws are rejected until the
    /// fastest-to-slowest frequency ratio is below it.
    NormalPeriod {
        mean: f64,
        sd: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_ratio: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseSpec {
    List(Vec<f64>),
    /// Independent draws from `[low, high)`.
    Uniform { low: f64, high: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSpec {
    pub frequencies: FrequencySpec,
    pub initial_phases: PhaseSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DelaySpec {
    Uniform(f64),
    /// `[a, b, delay]` triples; unlisted edges get no delay.
    PerEdge(Vec<(usize, usize, f64)>),
}

impl Default for DelaySpec {
    fn default() -> Self {
        DelaySpec::Uniform(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    /// Trailing fraction of the run used for the desynchronization verdict.
    pub window_fraction: f64,
    pub cycle_tolerance: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            window_fraction: DEFAULT_WINDOW_FRACTION,
            cycle_tolerance: DEFAULT_CYCLE_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: u32,
    #[serde(default)]
    pub seed: u64,
    pub topology: TopologySpec,
    pub oscillators: OscillatorSpec,
    pub interaction: InteractionSpec,
    #[serde(default)]
    pub delays: DelaySpec,
    pub duration: f64,
    pub sample_interval: f64,
    #[serde(default)]
    pub analysis: AnalysisOptions,
}

/// A validated scenario, ready to simulate.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub topology: NetworkTopology,
    pub oscillators: Vec<OscillatorConfig>,
    pub interaction: Interaction,
}

fn positive(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::validation(field, format!("must be finite and > 0, got {value}")))
    }
}

fn zero_based(field: &str, index: usize, n: usize) -> Result<usize> {
    if (1..=n).contains(&index) {
        Ok(index - 1)
    } else {
        Err(Error::validation(field, format!("index {index} outside 1..={n}")))
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Validates every field and draws the seeded random parts.
    pub fn resolve(&self) -> Result<Scenario> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::validation(
                "schema",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema),
            ));
        }
        positive("duration", self.duration)?;
        positive("sample_interval", self.sample_interval)?;
        let w = self.analysis.window_fraction;
        if !(w > 0.0 && w < 1.0) {
            return Err(Error::validation("analysis.window_fraction", format!("must lie in (0, 1), got {w}")));
        }
        positive("analysis.cycle_tolerance", self.analysis.cycle_tolerance)?;

        let n = self.topology.oscillators();
        if n == 0 {
            return Err(Error::validation("topology.n", "need at least one oscillator"));
        }
        let mut topology = self.build_topology()?;
        self.apply_delays(&mut topology)?;
        let frequencies = self.draw_frequencies(n)?;
        let phases = self.draw_phases(n)?;
        let interaction = self
            .interaction
            .build()
            .map_err(|e| Error::validation("interaction", e.to_string()))?;

        Ok(Scenario {
            config: self.clone(),
            topology,
            oscillators: frequencies
                .into_iter()
                .zip(phases)
                .map(|(w, x)| OscillatorConfig::new(w, x))
                .collect(),
            interaction,
        })
    }

    fn build_topology(&self) -> Result<NetworkTopology> {
        let field = |e: Error| Error::validation("topology", e.to_string());
        match &self.topology {
            TopologySpec::Complete { n } => Ok(NetworkTopology::complete(*n)),
            TopologySpec::Ring { n } => Ok(NetworkTopology::ring(*n)),
            TopologySpec::ErdosRenyi { n, p, seed } => {
                let mut rng = match seed {
                    Some(s) => ChaCha8Rng::seed_from_u64(*s),
                    None => stream_rng(self.seed, STREAM_TOPOLOGY),
                };
                NetworkTopology::erdos_renyi(*n, *p, &mut rng).map_err(field)
            }
            TopologySpec::Edges { n, edges } => {
                let pairs = edges
                    .iter()
                    .map(|&[a, b]| {
                        Ok((zero_based("topology.edges", a, *n)?, zero_based("topology.edges", b, *n)?, 0.0))
                    })
                    .collect::<Result<Vec<_>>>()?;
                NetworkTopology::new(*n, pairs).map_err(field)
            }
        }
    }

    fn apply_delays(&self, topology: &mut NetworkTopology) -> Result<()> {
        let field = |e: Error| Error::validation("delays", e.to_string());
        match &self.delays {
            DelaySpec::Uniform(d) => topology.set_uniform_delay(*d).map_err(field),
            DelaySpec::PerEdge(list) => {
                let n = topology.oscillators();
                for &(a, b, d) in list {
                    let (a, b) = (zero_based("delays", a, n)?, zero_based("delays", b, n)?);
                    topology.set_edge_delay(a, b, d).map_err(field)?;
                }
                Ok(())
            }
        }
    }

    fn draw_frequencies(&self, n: usize) -> Result<Vec<f64>> {
        const FIELD: &str = "oscillators.frequencies";
        match &self.oscillators.frequencies {
            FrequencySpec::Constant(w) => Ok(vec![positive(FIELD, *w)?; n]),
            FrequencySpec::List(ws) => {
                if ws.len() != n {
                    return Err(Error::validation(FIELD, format!("{} values for {n} oscillators", ws.len())));
                }
                ws.iter()
                    .enumerate()
                    .map(|(i, &w)| {
                        positive(FIELD, w).map_err(|_| {
                            Error::validation(
                                FIELD,
                                format!("oscillator {} has frequency {w}, must be finite and > 0", i + 1),
                            )
                        })
                    })
                    .collect()
            }
            FrequencySpec::NormalPeriod { mean, sd, max_ratio } => {
                positive(FIELD, *mean)?;
                if !sd.is_finite() || *sd < 0.0 {
                    return Err(Error::validation(FIELD, format!("sd must be finite and >= 0, got {sd}")));
                }
                if let Some(r) = max_ratio {
                    if !(r.is_finite() && *r > 1.0) {
                        return Err(Error::validation(FIELD, format!("max_ratio must be > 1, got {r}")));
                    }
                }
                let normal = Normal::new(*mean, *sd).map_err(|e| Error::validation(FIELD, e.to_string()))?;
                let mut rng = stream_rng(self.seed, STREAM_FREQUENCIES);
                for _ in 0..MAX_FREQUENCY_DRAWS {
                    let periods: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
                    if periods.iter().any(|&p| p <= 0.0) {
                        continue;
                    }
                    let fastest = periods.iter().copied().fold(f64::INFINITY, f64::min);
                    let slowest = periods.iter().copied().fold(0.0, f64::max);
                    if max_ratio.is_none_or(|r| slowest / fastest < r) {
                        return Ok(periods.iter().map(|p| 1.0 / p).collect());
                    }
                }
                Err(Error::validation(
                    FIELD,
                    format!("no admissible draw in {MAX_FREQUENCY_DRAWS} attempts"),
                ))
            }
        }
    }

    fn draw_phases(&self, n: usize) -> Result<Vec<Phase>> {
        const FIELD: &str = "oscillators.initial_phases";
        match &self.oscillators.initial_phases {
            PhaseSpec::List(xs) => {
                if xs.len() != n {
                    return Err(Error::validation(FIELD, format!("{} values for {n} oscillators", xs.len())));
                }
                xs.iter()
                    .map(|&x| {
                        if (0.0..1.0).contains(&x) {
                            Ok(Phase::wrap(x))
                        } else {
                            Err(Error::validation(FIELD, format!("phase {x} outside [0, 1)")))
                        }
                    })
                    .collect()
            }
            PhaseSpec::Uniform { low, high } => {
                if !(0.0 <= *low && low < high && *high <= 1.0) {
                    return Err(Error::validation(
                        FIELD,
                        format!("need 0 <= low < high <= 1, got [{low}, {high})"),
                    ));
                }
                let mut rng = stream_rng(self.seed, STREAM_PHASES);
                Ok((0..n).map(|_| Phase::wrap(rng.gen_range(*low..*high))).collect())
            }
        }
    }
}

/// Trace and diagnostics from one scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub trace: EventTrace,
    pub order_parameter: OrderParameterSeries,
    pub verdict: DesyncVerdict,
}

impl ScenarioRun {
    /// Mean order parameter over the analysis window.
    pub fn final_mean_order_parameter(&self) -> f64 {
        self.order_parameter
            .mean_since(self.verdict.window_start)
            .unwrap_or(f64::NAN)
    }
}

impl Scenario {
    pub fn run(self) -> Result<ScenarioRun> {
        let c = &self.config;
        let trace = Simulation::new(self.topology.clone(), &self.oscillators, self.interaction)?
            .run(c.duration, c.sample_interval)?;
        let order_parameter = order_parameter_series(&trace);
        let verdict = local_desync(
            &trace,
            &self.topology,
            c.analysis.window_fraction * c.duration,
            c.analysis.cycle_tolerance,
        )?;
        Ok(ScenarioRun {
            scenario: self,
            trace,
            order_parameter,
            verdict,
        })
    }
}
