//! Counting and sampling the desynchronized orbits of the all-to-all map.
//!
//! The cyclic relabelling group has order `N`, so the `N!` initial orderings
//! of the phases fall into `(N-1)!` classes that cannot be mapped onto one
//! another. Each class carries its own attracting orbit.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{converge_full_cycle, DifferenceState, FiringStep};
use crate::error::{Error, Result};
use crate::interaction::InteractionFunction;

/// Largest `n` for which `(n - 1)!` fits comfortably in a `u64`.
pub const MAX_ORBIT_COUNT_N: usize = 20;

/// Oscillator counts accepted by [`enumerate_attractors`].
pub const ATTRACTOR_N_RANGE: std::ops::RangeInclusive<usize> = 2..=8;

pub const MIN_ATTRACTOR_SAMPLES: usize = 100;

/// Round limit and tolerance used when sampling attractors.
pub const ATTRACTOR_MAX_CYCLES: usize = 5_000;
pub const ATTRACTOR_TOLERANCE: f64 = 1e-10;

/// Finite-difference step for Jacobians of the full-cycle map.
pub const JACOBIAN_STEP: f64 = 1e-7;

/// Number of distinct cyclic firing orders, `(n - 1)!`.
pub fn count_orbit_classes(n: usize) -> Result<u64> {
    if !(2..=MAX_ORBIT_COUNT_N).contains(&n) {
        return Err(Error::invalid(format!(
            "orbit counting supports 2 <= n <= {MAX_ORBIT_COUNT_N}, got {n}"
        )));
    }
    Ok((1..n as u64).product())
}

/// Rotates a cyclic sequence so that its smallest entry comes first.
pub fn canonical_cyclic_order(order: &[usize]) -> Vec<usize> {
    let Some(start) = order
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .map(|(i, _)| i)
    else {
        return Vec::new();
    };
    order[start..].iter().chain(&order[..start]).copied().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    /// Oscillator labels (1-based) in firing order, smallest label first.
    pub firing_order: Vec<usize>,
    /// Converged differences, taken when the leading oscillator of the first
    /// sample in this class reaches threshold.
    pub fixed_point: DifferenceState,
    /// Eigenvalue magnitudes of the linearized full-cycle map, largest first.
    pub multipliers: Vec<f64>,
    /// Samples that converged onto this orbit.
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnconvergedSample {
    pub sample: usize,
    pub firing_order: Vec<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorCensus {
    pub oscillators: usize,
    pub samples: usize,
    pub orbits: Vec<OrbitRecord>,
    pub unconverged: Vec<UnconvergedSample>,
}

impl AttractorCensus {
    pub fn converged(&self) -> usize {
        self.samples - self.unconverged.len()
    }

    pub fn convergence_rate(&self) -> f64 {
        self.converged() as f64 / self.samples as f64
    }
}

/// Central-difference Jacobian of `(T* o G)^N` at `d`.
pub fn full_cycle_jacobian<F: InteractionFunction + ?Sized>(
    d: &DifferenceState,
    f: &F,
    step: f64,
) -> Result<DMatrix<f64>> {
    let stepper = FiringStep::new(d.oscillators())?;
    let m = d.as_slice().len();
    let mut jac = DMatrix::zeros(m, m);
    for j in 0..m {
        let mut plus = d.as_slice().to_vec();
        let mut minus = plus.clone();
        plus[j] += step;
        minus[j] -= step;
        let fp = stepper.full_cycle(&DifferenceState::new(plus)?, f)?;
        let fm = stepper.full_cycle(&DifferenceState::new(minus)?, f)?;
        for i in 0..m {
            jac[(i, j)] = (fp.as_slice()[i] - fm.as_slice()[i]) / (2.0 * step);
        }
    }
    Ok(jac)
}

/// Moduli of the (possibly complex) eigenvalues, sorted descending.
pub fn spectrum_magnitudes(jacobian: &DMatrix<f64>) -> Vec<f64> {
    let mut mags: Vec<f64> = jacobian
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    mags
}

/// Samples random orderings, iterates each to its attractor, and groups the
/// results by cyclic firing order.
///
/// Sample `i` draws its phases from stream `i` of a ChaCha8 generator seeded
/// with `seed`, so samples are independent of each other and of the sample
/// count.
pub fn enumerate_attractors<F: InteractionFunction + ?Sized>(
    n: usize,
    samples: usize,
    seed: u64,
    f: &F,
) -> Result<AttractorCensus> {
    if !ATTRACTOR_N_RANGE.contains(&n) {
        return Err(Error::invalid(format!(
            "attractor sampling supports {} <= n <= {}, got {n}",
            ATTRACTOR_N_RANGE.start(),
            ATTRACTOR_N_RANGE.end()
        )));
    }
    if samples < MIN_ATTRACTOR_SAMPLES {
        return Err(Error::invalid(format!(
            "need at least {MIN_ATTRACTOR_SAMPLES} samples, got {samples}"
        )));
    }

    let mut classes: BTreeMap<Vec<usize>, (DifferenceState, usize)> = BTreeMap::new();
    let mut unconverged = Vec::new();

    for sample in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sample as u64);
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| phases[b].total_cmp(&phases[a]));
        let labels: Vec<usize> = order.iter().map(|i| i + 1).collect();
        let canonical = canonical_cyclic_order(&labels);

        let ordered: Vec<f64> = order.iter().map(|&i| phases[i]).collect();
        let outcome = DifferenceState::from_phases(&ordered).and_then(|d| {
            converge_full_cycle(&d, ATTRACTOR_MAX_CYCLES, f, ATTRACTOR_TOLERANCE)
        });
        match outcome {
            Ok(Some((fixed, _))) => {
                classes
                    .entry(canonical)
                    .and_modify(|(_, hits)| *hits += 1)
                    .or_insert((fixed, 1));
            }
            Ok(None) => unconverged.push(UnconvergedSample {
                sample,
                firing_order: canonical,
                reason: format!("no convergence within {ATTRACTOR_MAX_CYCLES} rounds"),
            }),
            Err(e) => unconverged.push(UnconvergedSample {
                sample,
                firing_order: canonical,
                reason: e.to_string(),
            }),
        }
    }

    let orbits = classes
        .into_iter()
        .map(|(firing_order, (fixed_point, hits))| {
            let multipliers = full_cycle_jacobian(&fixed_point, f, JACOBIAN_STEP)
                .map(|j| spectrum_magnitudes(&j))?;
            Ok(OrbitRecord {
                firing_order,
                fixed_point,
                multipliers,
                hits,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(AttractorCensus {
        oscillators: n,
        samples,
        orbits,
        unconverged,
    })
}
