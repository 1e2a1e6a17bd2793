//! Minimal runner for criteria that print one verdict line each.

use std::time::{Duration, Instant};

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs `body`, which returns `(passed, detail)`, and folds a wall-clock
/// budget into the verdict. Errors count as failures.
pub fn check<E: std::fmt::Display>(
    id: &'static str,
    title: &'static str,
    budget: Duration,
    body: impl FnOnce() -> Result<(bool, String), E>,
) -> Check {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > budget {
        passed = false;
        detail.push_str(&format!("; over the {:.0} s budget", budget.as_secs_f64()));
    }
    Check {
        id,
        title,
        passed,
        detail,
        elapsed,
    }
}
