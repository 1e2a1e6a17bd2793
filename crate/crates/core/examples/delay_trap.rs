// Two identical oscillators with a 0.1 propagation delay and a 0.05 head start,
// coupled first by the smooth log curve and then by the shifted cubic.

use pulse_desync::engine::{run, NetworkTopology, OscillatorConfig};
use pulse_desync::{Interaction, InteractionFunction, Phase, ShiftedCubic, SmoothLog};

/// Firing lag of oscillator 2 behind oscillator 1, as a fraction of the period.
fn lags(f: Interaction) -> pulse_desync::Result<Vec<f64>> {
    let mut topology = NetworkTopology::complete(2);
    topology.set_uniform_delay(0.1)?;
    let oscillators = [
        OscillatorConfig::new(1.0, Phase::new(0.05)?),
        OscillatorConfig::new(1.0, Phase::ZERO),
    ];
    let trace = run(topology, &oscillators, f, 60.0, 0.01)?;
    let times = |id| -> Vec<f64> {
        trace.firings().into_iter().filter(|&(_, i)| i == id).map(|(t, _)| t).collect()
    };
    let (a, b) = (times(0), times(1));
    Ok(a.windows(2)
        .zip(&b)
        .map(|(w, tb)| (tb - w[0]) / (w[1] - w[0]))
        .collect())
}

pub fn run_example() -> pulse_desync::Result<()> {
    for f in [
        Interaction::from(SmoothLog::new(2.0)?),
        Interaction::from(ShiftedCubic::new(0.1, 0.5)?),
    ] {
        let lag = lags(f)?;
        let shown: Vec<String> = lag.iter().take(8).map(|x| format!("{x:.4}")).collect();
        println!("{}", f.describe());
        println!("  lag per cycle: {} ... {:.6}", shown.join(" "), lag[lag.len() - 1]);
    }
    Ok(())
}

fn main() -> pulse_desync::Result<()> {
    run_example()
}
