//! Discrete-map reductions for identical, instantaneously coupled oscillators.
//!
//! Between firings every phase advances at the same rate, so phase
//! differences are conserved and the dynamics collapse onto what happens at
//! firing instants. For two oscillators this is the return map
//!
//! ```text
//!          |  f(d + 1)   -1 < d < 0
//!   F(d) = |  0          d = 0
//!          | -f(1 - d)    0 < d <= 1
//! ```
//!
//! on `d = x_1 - x_2`. For `N` all-to-all oscillators ordered
//! `x_1 > ... > x_N`, the differences `d_k = x_1 - x_{k+1}` taken when
//! oscillator 1 reaches threshold satisfy `0 < d_1 < ... < d_{N-1} < 1`. A
//! firing maps them by `G_k(d) = -f(1 - d_k)` and the cyclic relabelling
//! `T*` (see [`algebra`]) puts the next oscillator to fire in front, so one
//! full round of firings is `(T* o G)^N`.

pub mod algebra;
pub mod critical;
pub mod orbits;

use std::fmt;

use serde::Serialize;

pub use algebra::{
    build_cyclic_transform, build_difference_matrix, cyclic_permutation, CyclicTransform,
    DifferenceMatrix, IntMatrix,
};
pub use critical::{critical_ratio, limit_cycle_phase, CriticalRatio, LimitCycle, RatioSample};
pub use orbits::{
    canonical_cyclic_order, count_orbit_classes, enumerate_attractors, full_cycle_jacobian, spectrum_magnitudes,
    AttractorCensus, OrbitRecord, UnconvergedSample,
};

use crate::error::{Error, Result};
use crate::interaction::InteractionFunction;
use crate::phase::Phase;

/// Phase differences `d_k = x_1 - x_{k+1}` in the rotating frame of oscillator 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DifferenceState(Vec<f64>);

impl DifferenceState {
    /// Components must be finite and lie in `(-1, 1)`.
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::invalid("difference state needs at least one component"));
        }
        if let Some((k, v)) = d
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || v.abs() >= 1.0)
        {
            return Err(Error::invalid(format!(
                "d_{} = {v} must be finite and inside (-1, 1)",
                k + 1
            )));
        }
        Ok(Self(d))
    }

    /// Differences of raw phases relative to the first entry.
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        if phases.len() < 2 {
            return Err(Error::invalid("need at least two phases"));
        }
        Self::new(phases[1..].iter().map(|x| phases[0] - x).collect())
    }

    /// Evenly spread ordered state `(1/N, 2/N, ..., (N-1)/N)`.
    pub fn splay(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("need at least 2 oscillators, got {n}")));
        }
        Self::new((1..n).map(|k| k as f64 / n as f64).collect())
    }

    pub fn oscillators(&self) -> usize {
        self.0.len() + 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &DifferenceState) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Checks `0 < d_1 < ... < d_{N-1} < 1`.
    pub fn check_ordering(&self) -> Result<()> {
        let d = &self.0;
        let violation = |lower: usize, upper: usize, lv: f64, uv: f64| Error::OrderingViolation {
            lower,
            upper,
            lower_value: lv,
            upper_value: uv,
        };
        if d[0] <= 0.0 {
            return Err(violation(0, 1, 0.0, d[0]));
        }
        for k in 1..d.len() {
            if d[k] <= d[k - 1] {
                return Err(violation(k, k + 1, d[k - 1], d[k]));
            }
        }
        let last = d.len() - 1;
        if d[last] >= 1.0 {
            return Err(violation(last + 1, last + 2, d[last], 1.0));
        }
        Ok(())
    }
}

impl fmt::Display for DifferenceState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:.10}")?;
        }
        write!(f, ")")
    }
}

/// Two-oscillator return map `F`.
pub fn return_map_two<F: InteractionFunction + ?Sized>(d: f64, f: &F) -> Result<f64> {
    if !(d > -1.0 && d <= 1.0) {
        return Err(Error::invalid(format!("d must lie in (-1, 1], got {d}")));
    }
    Ok(if d < 0.0 {
        f.apply(Phase::wrap(d + 1.0)).value()
    } else if d == 0.0 {
        0.0
    } else {
        -f.apply(Phase::wrap(1.0 - d)).value()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMapTrajectory {
    /// `d0` followed by every iterate.
    pub values: Vec<f64>,
    /// Index of the first value within tolerance of the `{+0.5, -0.5}` cycle.
    pub converged_at: Option<usize>,
}

/// Iterates [`return_map_two`] `steps` times from `d0`.
pub fn iterate_return_map<F: InteractionFunction + ?Sized>(
    d0: f64,
    steps: usize,
    f: &F,
    tolerance: f64,
) -> Result<ReturnMapTrajectory> {
    let mut values = Vec::with_capacity(steps + 1);
    let mut d = d0;
    // validates d0 even when steps == 0
    return_map_two(d, f)?;
    values.push(d);
    for _ in 0..steps {
        d = return_map_two(d, f)?;
        values.push(d);
    }
    let converged_at = values
        .iter()
        .position(|v| (v.abs() - 0.5).abs() < tolerance);
    Ok(ReturnMapTrajectory {
        values,
        converged_at,
    })
}

/// Firing map `G_k(d) = -f(1 - d_k)`, defined on ordered states.
pub fn apply_g<F: InteractionFunction + ?Sized>(
    d: &DifferenceState,
    f: &F,
) -> Result<DifferenceState> {
    d.check_ordering()?;
    Ok(DifferenceState(
        d.0.iter()
            .map(|&dk| -f.apply(Phase::wrap(1.0 - dk)).value())
            .collect(),
    ))
}

/// Precomputed single-firing step `T* o G` for a fixed oscillator count.
#[derive(Debug, Clone)]
pub struct FiringStep {
    transform: CyclicTransform,
}

impl FiringStep {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            transform: build_cyclic_transform(n)?,
        })
    }

    pub fn oscillators(&self) -> usize {
        self.transform.oscillators()
    }

    pub fn transform(&self) -> &CyclicTransform {
        &self.transform
    }

    /// One firing followed by relabelling.
    pub fn step<F: InteractionFunction + ?Sized>(
        &self,
        d: &DifferenceState,
        f: &F,
    ) -> Result<DifferenceState> {
        if d.oscillators() != self.oscillators() {
            return Err(Error::invalid(format!(
                "state has {} oscillators, step built for {}",
                d.oscillators(),
                self.oscillators()
            )));
        }
        let g = apply_g(d, f)?;
        Ok(DifferenceState(self.transform.apply(&g.0)))
    }

    /// A full round `(T* o G)^N`, after which every oscillator has fired once
    /// and the labels are back in their original order.
    pub fn full_cycle<F: InteractionFunction + ?Sized>(
        &self,
        d: &DifferenceState,
        f: &F,
    ) -> Result<DifferenceState> {
        let mut state = d.clone();
        for _ in 0..self.oscillators() {
            state = self.step(&state, f)?;
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullCycleTrajectory {
    /// Initial state followed by the state after every full round.
    pub states: Vec<DifferenceState>,
    /// First round index whose change from the previous round is below tolerance.
    pub converged_at: Option<usize>,
}

impl FullCycleTrajectory {
    pub fn last(&self) -> &DifferenceState {
        self.states.last().expect("trajectory always holds the initial state")
    }
}

/// Applies `(T* o G)` `N * cycles` times, recording every `N`-th state.
pub fn iterate_full_cycle<F: InteractionFunction + ?Sized>(
    d: &DifferenceState,
    cycles: usize,
    f: &F,
    tolerance: f64,
) -> Result<FullCycleTrajectory> {
    let stepper = FiringStep::new(d.oscillators())?;
    d.check_ordering()?;
    let mut states = Vec::with_capacity(cycles + 1);
    states.push(d.clone());
    let mut converged_at = None;
    for c in 1..=cycles {
        let next = stepper.full_cycle(&states[c - 1], f)?;
        if converged_at.is_none() && next.max_abs_diff(&states[c - 1]) < tolerance {
            converged_at = Some(c);
        }
        states.push(next);
    }
    Ok(FullCycleTrajectory {
        states,
        converged_at,
    })
}

/// Runs full rounds until successive states agree to `tolerance`, returning
/// the converged state and the number of rounds used.
pub fn converge_full_cycle<F: InteractionFunction + ?Sized>(
    d: &DifferenceState,
    max_cycles: usize,
    f: &F,
    tolerance: f64,
) -> Result<Option<(DifferenceState, usize)>> {
    let stepper = FiringStep::new(d.oscillators())?;
    d.check_ordering()?;
    let mut state = d.clone();
    for c in 1..=max_cycles {
        let next = stepper.full_cycle(&state, f)?;
        let change = next.max_abs_diff(&state);
        state = next;
        if change < tolerance {
            return Ok(Some((state, c)));
        }
    }
    Ok(None)
}
