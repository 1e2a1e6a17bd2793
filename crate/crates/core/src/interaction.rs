//! Phase-resetting interaction functions.
//!
//! When a pulse reaches an oscillator its phase `x` is replaced by `f(x)`.
//! Two families are provided:
//!
//! * [`SmoothLog`]: `f(x) = (ln(1 + (e^g - 1) x) - ln(1 + (e^-g - 1) x)) / (2 g)`.
//!   Fixed points sit at 0 (repelling, synchrony) and 0.5 (attracting, antiphase)
//!   for every gain `g > 0`; `g = 2` is the classic curve.
//! * [`ShiftedCubic`]: `f(x) = a x^3 + b x^2 + c x - tau (mod 1)`, which keeps the
//!   attracting point at 0.5 while removing the fixed point at 0, so that a
//!   propagation delay cannot turn synchrony into an attractor.
//!
//! Any other monotone degree-one circle map can be plugged in by implementing
//! [`InteractionFunction`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;

/// Multipliers within this distance of 1 are reported as [`Stability::Marginal`].
pub const MARGINAL_BAND: f64 = 1e-6;

/// Grid spacing used to bracket fixed points.
pub const FIXED_POINT_GRID: usize = 1000;

/// Number of intervals in the monotonicity scan of [`validate_circle_map`].
pub const VALIDATION_GRID: usize = 10_000;

/// A monotone circle map used as the phase-resetting rule.
///
/// `lift` is a real-valued lift on `[0, 1]` with `lift(1) = lift(0) + 1`; the
/// circle map itself is the lift taken modulo 1.
pub trait InteractionFunction {
    fn lift(&self, x: f64) -> f64;

    /// Derivative of the lift.
    fn derivative(&self, x: f64) -> f64;

    fn apply(&self, x: Phase) -> Phase {
        Phase::wrap(self.lift(x.value()))
    }

    fn describe(&self) -> String;
}

impl<T: InteractionFunction + ?Sized> InteractionFunction for &T {
    fn lift(&self, x: f64) -> f64 {
        (**self).lift(x)
    }
    fn derivative(&self, x: f64) -> f64 {
        (**self).derivative(x)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Logarithmic rise-function family with a tunable gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothLog {
    gain: f64,
    up: f64,
    down: f64,
}

impl SmoothLog {
    pub fn new(gain: f64) -> Result<Self> {
        if !gain.is_finite() || gain <= 0.0 {
            return Err(Error::invalid(format!(
                "smooth_log gain must be finite and > 0, got {gain}"
            )));
        }
        Ok(Self {
            gain,
            up: gain.exp_m1(),
            down: (-gain).exp_m1(),
        })
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }
}

impl InteractionFunction for SmoothLog {
    fn lift(&self, x: f64) -> f64 {
        ((self.up * x).ln_1p() - (self.down * x).ln_1p()) / (2.0 * self.gain)
    }

    fn derivative(&self, x: f64) -> f64 {
        (self.up / (1.0 + self.up * x) - self.down / (1.0 + self.down * x)) / (2.0 * self.gain)
    }

    fn describe(&self) -> String {
        format!("smooth_log(gain={})", self.gain)
    }
}

/// Evaluates the smooth log family at `x` without constructing a [`SmoothLog`].
pub fn eval_smooth_log(x: f64, gain: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("x must be finite, got {x}")));
    }
    Ok(SmoothLog::new(gain)?.lift(x))
}

/// Coefficients of the cubic part `a x^3 + b x^2 + c x` of a [`ShiftedCubic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CubicCoefficients {
    pub fn eval(&self, x: f64) -> f64 {
        ((self.a * x + self.b) * x + self.c) * x
    }

    pub fn slope(&self, x: f64) -> f64 {
        (3.0 * self.a * x + 2.0 * self.b) * x + self.c
    }

    /// Smallest slope on `[0, 1]` and where it occurs.
    fn min_slope(&self) -> (f64, f64) {
        let mut best = (0.0, self.slope(0.0));
        let mut consider = |x: f64| {
            let s = self.slope(x);
            if s < best.1 {
                best = (x, s);
            }
        };
        consider(1.0);
        if self.a > 0.0 {
            let vertex = -self.b / (3.0 * self.a);
            if (0.0..=1.0).contains(&vertex) {
                consider(vertex);
            }
        }
        best
    }
}

/// Solves the interpolation conditions `cubic(0) = 0`, `cubic(1) = 1`,
/// `cubic(0.5) = 0.5 + tau` and `cubic'(0.5) = beta`.
///
/// Fails when the resulting cubic is not strictly increasing on `[0, 1]`.
pub fn solve_cubic_coefficients(tau: f64, beta: f64) -> Result<CubicCoefficients> {
    let coeffs = cubic_coefficients_unchecked(tau, beta)?;
    let (at, slope) = coeffs.min_slope();
    if slope <= 0.0 {
        return Err(Error::ConstraintViolation {
            tau,
            beta,
            message: format!("cubic slope {slope:.6} <= 0 at x = {at:.6}"),
        });
    }
    Ok(coeffs)
}

fn cubic_coefficients_unchecked(tau: f64, beta: f64) -> Result<CubicCoefficients> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::invalid(format!("tau must lie in (0, 1), got {tau}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::invalid(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(CubicCoefficients {
        a: 4.0 * (1.0 - beta),
        b: 6.0 * beta - 4.0 * tau - 6.0,
        c: 4.0 * tau - 2.0 * beta + 3.0,
    })
}

/// Cubic circle map with a stable fixed point at 0.5 and none at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedCubic {
    tau: f64,
    beta: f64,
    coeffs: CubicCoefficients,
}

impl ShiftedCubic {
    pub fn new(tau: f64, beta: f64) -> Result<Self> {
        let coeffs = solve_cubic_coefficients(tau, beta)?;
        Ok(Self { tau, beta, coeffs })
    }

    /// Skips the monotonicity check; parameter ranges are still enforced.
    /// Useful for feeding deliberately broken maps to [`validate_circle_map`].
    pub fn new_unchecked(tau: f64, beta: f64) -> Result<Self> {
        let coeffs = cubic_coefficients_unchecked(tau, beta)?;
        Ok(Self { tau, beta, coeffs })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn coefficients(&self) -> CubicCoefficients {
        self.coeffs
    }
}

impl InteractionFunction for ShiftedCubic {
    fn lift(&self, x: f64) -> f64 {
        self.coeffs.eval(x) - self.tau
    }

    fn derivative(&self, x: f64) -> f64 {
        self.coeffs.slope(x)
    }

    fn describe(&self) -> String {
        format!("shifted_cubic(tau={}, beta={})", self.tau, self.beta)
    }
}

/// Serializable selector for the built-in families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum InteractionSpec {
    SmoothLog { gain: f64 },
    ShiftedCubic { tau: f64, beta: f64 },
}

impl InteractionSpec {
    pub fn build(&self) -> Result<Interaction> {
        Ok(match *self {
            InteractionSpec::SmoothLog { gain } => Interaction::SmoothLog(SmoothLog::new(gain)?),
            InteractionSpec::ShiftedCubic { tau, beta } => {
                Interaction::ShiftedCubic(ShiftedCubic::new(tau, beta)?)
            }
        })
    }
}

/// One of the built-in families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interaction {
    SmoothLog(SmoothLog),
    ShiftedCubic(ShiftedCubic),
}

impl Interaction {
    pub fn spec(&self) -> InteractionSpec {
        match self {
            Interaction::SmoothLog(s) => InteractionSpec::SmoothLog { gain: s.gain },
            Interaction::ShiftedCubic(c) => InteractionSpec::ShiftedCubic {
                tau: c.tau,
                beta: c.beta,
            },
        }
    }
}

impl InteractionFunction for Interaction {
    fn lift(&self, x: f64) -> f64 {
        match self {
            Interaction::SmoothLog(s) => s.lift(x),
            Interaction::ShiftedCubic(c) => c.lift(x),
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        match self {
            Interaction::SmoothLog(s) => s.derivative(x),
            Interaction::ShiftedCubic(c) => c.derivative(x),
        }
    }

    fn describe(&self) -> String {
        match self {
            Interaction::SmoothLog(s) => s.describe(),
            Interaction::ShiftedCubic(c) => c.describe(),
        }
    }
}

impl From<SmoothLog> for Interaction {
    fn from(s: SmoothLog) -> Self {
        Interaction::SmoothLog(s)
    }
}

impl From<ShiftedCubic> for Interaction {
    fn from(c: ShiftedCubic) -> Self {
        Interaction::ShiftedCubic(c)
    }
}

/// Analytic derivative of `f` at `x`, for `x` in `[0, 1]`.
pub fn derivative<F: InteractionFunction + ?Sized>(f: &F, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(f.derivative(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl Stability {
    pub fn from_multiplier(multiplier: f64) -> Self {
        let m = multiplier.abs();
        if (m - 1.0).abs() < MARGINAL_BAND {
            Stability::Marginal
        } else if m < 1.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub location: Phase,
    pub multiplier: f64,
    pub stability: Stability,
}

/// Signed distance from `lift(x) - x` to the nearest integer.
fn circle_residual<F: InteractionFunction + ?Sized>(f: &F, x: f64) -> f64 {
    let r = f.lift(x) - x;
    r - r.round()
}

/// Locates every solution of `f(x) = x` on the circle.
///
/// Sign changes of the wrapped residual are bracketed on a grid of step
/// `1 / FIXED_POINT_GRID` and refined by bisection. Brackets produced by the
/// residual jumping across a half-integer are discarded.
pub fn classify_fixed_points<F: InteractionFunction + ?Sized>(f: &F) -> Vec<FixedPointReport> {
    let n = FIXED_POINT_GRID;
    let mut roots: Vec<f64> = Vec::new();
    let push = |x: f64, roots: &mut Vec<f64>| {
        let x = Phase::wrap(x).value();
        if roots.iter().all(|&r| wrapped(r - x) > 1e-8) {
            roots.push(x);
        }
    };

    let mut prev_x = 0.0;
    let mut prev_r = circle_residual(f, prev_x);
    if prev_r == 0.0 {
        push(prev_x, &mut roots);
    }
    for i in 1..=n {
        let x = i as f64 / n as f64;
        let r = circle_residual(f, x);
        if r == 0.0 {
            push(x, &mut roots);
        } else if prev_r != 0.0 && prev_r.signum() != r.signum() {
            if let Some(root) = bisect_root(|t| circle_residual(f, t), prev_x, x) {
                push(root, &mut roots);
            }
        }
        prev_x = x;
        prev_r = r;
    }

    roots.sort_by(f64::total_cmp);
    roots
        .into_iter()
        .map(|x| {
            let multiplier = f.derivative(x);
            FixedPointReport {
                location: Phase::wrap(x),
                multiplier,
                stability: Stability::from_multiplier(multiplier),
            }
        })
        .collect()
}

fn wrapped(d: f64) -> f64 {
    crate::phase::wrapped_distance(d)
}

/// Bisection on a sign-changing bracket; returns `None` when the bracket
/// straddles a jump rather than a root.
fn bisect_root(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut g_lo = g(lo);
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    (g(root).abs() < 1e-9).then_some(root)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonPositiveDerivative { x: f64, derivative: f64 },
    NonFinite { x: f64 },
    /// `lift(1) - lift(0)` differs from 1, so the map is not a degree-one circle map.
    Degree { winding: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub grid_points: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// First grid location where the derivative failed to be positive.
    pub fn first_slope_violation(&self) -> Option<f64> {
        self.violations.iter().find_map(|v| match v {
            Violation::NonPositiveDerivative { x, .. } => Some(*x),
            _ => None,
        })
    }
}

/// Grid check that `f` is an increasing degree-one circle map.
pub fn validate_circle_map<F: InteractionFunction + ?Sized>(f: &F) -> ValidationReport {
    let n = VALIDATION_GRID;
    let mut violations = Vec::new();
    for i in 0..=n {
        let x = i as f64 / n as f64;
        let value = f.lift(x);
        let slope = f.derivative(x);
        if !value.is_finite() || !slope.is_finite() {
            violations.push(Violation::NonFinite { x });
        } else if slope <= 0.0 {
            violations.push(Violation::NonPositiveDerivative {
                x,
                derivative: slope,
            });
        }
    }
    let winding = f.lift(1.0) - f.lift(0.0);
    if winding.is_finite() && (winding - 1.0).abs() > 1e-9 {
        violations.push(Violation::Degree { winding });
    }
    ValidationReport {
        grid_points: n + 1,
        violations,
    }
}
