//! Points on the unit circle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Oscillator phase as a fraction of one period, always in `[0, 1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);

    /// Builds a phase from any finite real, wrapping modulo 1.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::invalid(format!("phase must be finite, got {value}")));
        }
        Ok(Self::wrap(value))
    }

    /// Wraps a finite real onto `[0, 1)`.
    ///
    /// `rem_euclid` can round up to exactly 1.0 for tiny negative inputs;
    /// that value is identified with 0.
    #[inline]
    pub fn wrap(value: f64) -> Self {
        debug_assert!(value.is_finite());
        let w = value.rem_euclid(1.0);
        if w >= 1.0 {
            Phase(0.0)
        } else {
            Phase(w)
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Circle metric `min(|a - b|, 1 - |a - b|)`, in `[0, 0.5]`.
    #[inline]
    pub fn distance(self, other: Phase) -> f64 {
        wrapped_distance(self.0 - other.0)
    }
}

/// Circle distance of a raw phase difference.
#[inline]
pub fn wrapped_distance(delta: f64) -> f64 {
    let d = delta.rem_euclid(1.0);
    d.min(1.0 - d)
}

impl TryFrom<f64> for Phase {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Phase::new(value)
    }
}

impl From<Phase> for f64 {
    fn from(p: Phase) -> f64 {
        p.0
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
