//! CSV and text writers. Numbers are written in plain decimal with 12
//! significant digits; oscillator ids are 1-based.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::analysis::{DesyncVerdict, OrderParameterSeries};
use crate::engine::EventTrace;
use crate::error::{Error, Result};
use crate::phasemap::{AttractorCensus, CriticalRatio, DifferenceState};
use crate::scenario::ScenarioRun;

pub const SIGNIFICANT_DIGITS: i32 = 12;

pub const SNAPSHOTS_FILE: &str = "snapshots.csv";
pub const EVENTS_FILE: &str = "events.csv";
pub const ORDER_PARAMETER_FILE: &str = "order_parameter.csv";
pub const VERDICT_FILE: &str = "verdict.csv";
pub const LIMIT_CYCLE_FILE: &str = "limit_cycle.txt";
pub const SCENARIO_FILE: &str = "scenario.json";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const RHO_SWEEP_FILE: &str = "rho_sweep.csv";
pub const ORBITS_FILE: &str = "orbits.csv";

/// Plain decimal with [`SIGNIFICANT_DIGITS`] significant digits, trailing
/// zeros removed.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - exponent).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn ids(order: &[usize]) -> String {
    order.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::Writer::from_writer(w)
}

pub fn write_snapshots<W: Write>(w: &mut W, trace: &EventTrace) -> io::Result<()> {
    let mut out = csv_writer(w);
    let header = std::iter::once("t".to_string())
        .chain((1..=trace.oscillators).map(|i| format!("x_{i}")));
    out.write_record(header)?;
    for s in &trace.snapshots {
        let row = std::iter::once(fmt_num(s.time)).chain(s.phases.iter().map(|p| fmt_num(p.value())));
        out.write_record(row)?;
    }
    out.flush()
}

/// For deliveries `id` is the receiving oscillator.
pub fn write_events<W: Write>(w: &mut W, trace: &EventTrace) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["t", "id", "kind"])?;
    for e in &trace.events {
        let id = e.kind.subject() + 1;
        out.write_record([fmt_num(e.time), id.to_string(), e.kind.label().to_string()])?;
    }
    out.flush()
}

pub fn write_order_parameter<W: Write>(w: &mut W, series: &OrderParameterSeries) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["t", "P"])?;
    for &(t, p) in &series.rows {
        out.write_record([fmt_num(t), fmt_num(p)])?;
    }
    out.flush()
}

pub fn write_verdict<W: Write>(w: &mut W, verdict: &DesyncVerdict) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["edge", "distance", "alternating", "desynchronized"])?;
    for e in &verdict.edges {
        out.write_record([
            format!("{}-{}", e.a + 1, e.b + 1),
            fmt_num(e.distance),
            e.alternating.to_string(),
            e.desynchronized.to_string(),
        ])?;
    }
    out.flush()
}

/// `none,none` when no repeating pattern was found.
pub fn write_limit_cycle<W: Write>(w: &mut W, verdict: &DesyncVerdict) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["period", "order"])?;
    match &verdict.limit_cycle {
        Some(lc) => out.write_record([fmt_num(lc.period), ids(&lc.order)])?,
        None => out.write_record(["none", "none"])?,
    }
    out.flush()
}

pub fn write_trajectory<W: Write>(w: &mut W, states: &[DifferenceState]) -> io::Result<()> {
    let mut out = csv_writer(w);
    let m = states.first().map_or(0, |s| s.as_slice().len());
    out.write_record(std::iter::once("step".to_string()).chain((1..=m).map(|k| format!("d_{k}"))))?;
    for (k, s) in states.iter().enumerate() {
        out.write_record(std::iter::once(k.to_string()).chain(s.as_slice().iter().map(|&v| fmt_num(v))))?;
    }
    out.flush()
}

pub fn write_rho_sweep<W: Write>(w: &mut W, critical: &CriticalRatio) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["rho", "x_star", "alternating"])?;
    for s in &critical.samples {
        let x = s.x_star.map_or_else(|| "none".to_string(), fmt_num);
        out.write_record([fmt_num(s.rho), x, s.alternating.to_string()])?;
    }
    out.flush()
}

pub fn write_orbits<W: Write>(w: &mut W, census: &AttractorCensus) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["order", "hits", "fixed_point", "max_multiplier"])?;
    for o in &census.orbits {
        let order: Vec<String> = o.firing_order.iter().map(|i| i.to_string()).collect();
        let d: Vec<String> = o.fixed_point.as_slice().iter().map(|&v| fmt_num(v)).collect();
        let top = o.multipliers.first().copied().unwrap_or(f64::NAN);
        out.write_record([order.join(" "), o.hits.to_string(), d.join(" "), fmt_num(top)])?;
    }
    out.flush()
}

/// Creates `path` and fills it with `body`.
pub fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes the resolved scenario, trace and diagnostics of a run into `dir`.
pub fn write_run(dir: &Path, run: &ScenarioRun) -> Result<()> {
    ensure_dir(dir)?;
    write_file(&dir.join(SCENARIO_FILE), |w| {
        writeln!(w, "{}", run.scenario.config.to_json())
    })?;
    write_file(&dir.join(SNAPSHOTS_FILE), |w| write_snapshots(w, &run.trace))?;
    write_file(&dir.join(EVENTS_FILE), |w| write_events(w, &run.trace))?;
    write_file(&dir.join(ORDER_PARAMETER_FILE), |w| {
        write_order_parameter(w, &run.order_parameter)
    })?;
    write_file(&dir.join(VERDICT_FILE), |w| write_verdict(w, &run.verdict))?;
    write_file(&dir.join(LIMIT_CYCLE_FILE), |w| write_limit_cycle(w, &run.verdict))
}
