//! Critical frequency ratio for two pulse-coupled oscillators.
//!
//! Let the fast oscillator run at `rho >= 1` times the rate of the slow one
//! and let `x` be the slow oscillator's phase right after a pulse from the
//! fast one. The fast oscillator is then at 0; it reaches phase
//! `rho (1 - x)` when the slow one fires and gets reset to
//! `y = f(rho (1 - x))`; the slow oscillator has advanced `(1 - y) / rho` by
//! the time the fast one fires again. The limit cycle solves
//!
//! ```text
//! x = f((1 - f(rho (1 - x))) / rho)
//! ```
//!
//! Firings alternate as long as neither oscillator completes a full period
//! while the other is still on its way to threshold: `rho (1 - x) < 1` on the
//! half-cycle after the fast one fires and `(1 - y) / rho < 1` on the other.
//! The critical ratio is the supremum of `rho` for which the iteration
//! settles onto an alternating cycle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interaction::InteractionFunction;

pub const MAX_INNER_ITERATIONS: usize = 10_000;
pub const INNER_TOLERANCE: f64 = 1e-12;

/// Coarse bracketing step and upper limit of the ratio search.
const SWEEP_STEP: f64 = 0.01;
const MAX_RATIO: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitCycle {
    pub rho: f64,
    /// Slow oscillator phase right after the fast one fires, when a cycle exists.
    pub x_star: Option<f64>,
    pub alternating: bool,
    pub iterations: usize,
}

/// Solves for the two-oscillator limit cycle at ratio `rho` by fixed-point
/// iteration from `x = 0.5`.
///
/// Returns `alternating = false` with no `x_star` as soon as an iterate puts
/// the fast oscillator past threshold before the slow one fires. Fails with a
/// solver error when the iteration neither settles nor escapes within
/// [`MAX_INNER_ITERATIONS`] steps.
pub fn limit_cycle_phase<F: InteractionFunction + ?Sized>(f: &F, rho: f64) -> Result<LimitCycle> {
    if !rho.is_finite() || rho < 1.0 {
        return Err(Error::invalid(format!("frequency ratio must be >= 1, got {rho}")));
    }
    let overtaken = |iterations| LimitCycle {
        rho,
        x_star: None,
        alternating: false,
        iterations,
    };
    let mut x = 0.5;
    for it in 1..=MAX_INNER_ITERATIONS {
        let fast = rho * (1.0 - x);
        if fast >= 1.0 {
            return Ok(overtaken(it));
        }
        let y = f.lift(fast);
        let next = f.lift((1.0 - y) / rho);
        if !next.is_finite() {
            return Err(Error::Solver(format!("non-finite iterate at rho = {rho}")));
        }
        if (next - x).abs() < INNER_TOLERANCE {
            let fast = rho * (1.0 - next);
            let y = f.lift(fast);
            let alternating = fast < 1.0 && (1.0 - y) / rho < 1.0;
            return Ok(LimitCycle {
                rho,
                x_star: Some(next),
                alternating,
                iterations: it,
            });
        }
        x = next;
    }
    Err(Error::Solver(format!(
        "limit cycle iteration did not converge within {MAX_INNER_ITERATIONS} steps at rho = {rho}"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSample {
    pub rho: f64,
    pub x_star: Option<f64>,
    pub alternating: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalRatio {
    pub rho_c: f64,
    pub tolerance: f64,
    /// Every evaluated ratio, sorted ascending.
    pub samples: Vec<RatioSample>,
}

impl CriticalRatio {
    pub fn solver_failures(&self) -> impl Iterator<Item = &RatioSample> {
        self.samples.iter().filter(|s| s.error.is_some())
    }
}

fn sample<F: InteractionFunction + ?Sized>(f: &F, rho: f64) -> RatioSample {
    match limit_cycle_phase(f, rho) {
        Ok(lc) => RatioSample {
            rho,
            x_star: lc.x_star,
            alternating: lc.alternating,
            error: None,
        },
        // an unsettled iteration is not evidence of alternation
        Err(e) => RatioSample {
            rho,
            x_star: None,
            alternating: false,
            error: Some(e.to_string()),
        },
    }
}

/// Largest frequency ratio with an alternating limit cycle, to within `tolerance`.
///
/// Brackets the boundary with a sweep of step 0.01 from `rho = 1` and then
/// bisects. The returned value is the largest ratio verified to alternate.
pub fn critical_ratio<F: InteractionFunction + ?Sized>(
    f: &F,
    tolerance: f64,
) -> Result<CriticalRatio> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be > 0, got {tolerance}")));
    }
    let mut samples = Vec::new();

    let base = sample(f, 1.0);
    let base_ok = base.alternating;
    samples.push(base);
    if !base_ok {
        return Err(Error::Solver(
            "identical frequencies do not give an alternating cycle".into(),
        ));
    }

    let mut lo = 1.0;
    let mut hi = None;
    let mut k = 1;
    while hi.is_none() {
        let rho = 1.0 + k as f64 * SWEEP_STEP;
        if rho > MAX_RATIO {
            return Err(Error::Solver(format!(
                "alternation persists up to rho = {MAX_RATIO}; no critical ratio found"
            )));
        }
        let s = sample(f, rho);
        if s.alternating {
            lo = rho;
        } else {
            hi = Some(rho);
        }
        samples.push(s);
        k += 1;
    }
    let mut hi = hi.expect("loop exits with a failing ratio");

    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        let s = sample(f, mid);
        if s.alternating {
            lo = mid;
        } else {
            hi = mid;
        }
        samples.push(s);
    }

    samples.sort_by(|a, b| a.rho.total_cmp(&b.rho));
    Ok(CriticalRatio {
        rho_c: lo,
        tolerance,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interaction::SmoothLog;

    #[test]
    fn identical_frequencies_give_antiphase() {
        let f = SmoothLog::new(2.0).unwrap();
        let lc = limit_cycle_phase(&f, 1.0).unwrap();
        assert!(lc.alternating);
        assert!((lc.x_star.unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn large_ratio_overtakes() {
        let f = SmoothLog::new(2.0).unwrap();
        let lc = limit_cycle_phase(&f, 1.5).unwrap();
        assert!(!lc.alternating);
        assert!(lc.x_star.is_none());
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = SmoothLog::new(2.0).unwrap();
        assert!(limit_cycle_phase(&f, 0.9).is_err());
        assert!(critical_ratio(&f, 0.0).is_err());
        assert!(critical_ratio(&f, f64::NAN).is_err());
    }

    #[test]
    fn classic_curve_ratio() {
        let f = SmoothLog::new(2.0).unwrap();
        let rc = critical_ratio(&f, 1e-4).unwrap();
        assert!((1.10..=1.12).contains(&rc.rho_c), "{}", rc.rho_c);
        assert!(rc.samples.windows(2).all(|w| w[0].rho <= w[1].rho));
        assert!(rc.samples.iter().any(|s| !s.alternating));
    }

    #[test]
    fn steeper_curve_tolerates_larger_ratio() {
        let two = critical_ratio(&SmoothLog::new(2.0).unwrap(), 1e-4).unwrap().rho_c;
        let four = critical_ratio(&SmoothLog::new(4.0).unwrap(), 1e-4).unwrap().rho_c;
        assert!(four > two);
    }
}
