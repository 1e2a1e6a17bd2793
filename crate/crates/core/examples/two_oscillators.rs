// Two identical oscillators: the return map and the event-driven engine both
// end in antiphase.

use pulse_desync::engine::{run, NetworkTopology, OscillatorConfig};
use pulse_desync::phasemap::iterate_return_map;
use pulse_desync::{Phase, SmoothLog};

pub fn run_example() -> pulse_desync::Result<()> {
    let f = SmoothLog::new(2.0)?;

    let traj = iterate_return_map(0.1, 100, &f, 1e-9)?;
    let head: Vec<String> = traj.values.iter().take(8).map(|d| format!("{d:+.4}")).collect();
    println!("return map from d = 0.1: {} ...", head.join(" "));
    println!("within 1e-9 of the period-2 orbit after {:?} steps", traj.converged_at);

    let oscillators = [
        OscillatorConfig::new(1.0, Phase::new(0.9)?),
        OscillatorConfig::new(1.0, Phase::new(0.4)?),
    ];
    let trace = run(NetworkTopology::complete(2), &oscillators, f, 30.0, 0.1)?;
    let firings = trace.firings();
    println!("last firings (t, oscillator):");
    for w in firings[firings.len() - 5..].windows(2) {
        println!("  {:.6} #{}  gap {:.6}", w[1].0, w[1].1 + 1, w[1].0 - w[0].0);
    }
    Ok(())
}

fn main() -> pulse_desync::Result<()> {
    run_example()
}
