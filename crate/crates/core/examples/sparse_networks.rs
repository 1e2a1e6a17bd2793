// Desynchronization is local: on a ring or a random graph only connected
// oscillators need to keep apart.

use pulse_desync::engine::Preset;
use pulse_desync::scenario::TopologySpec;

pub fn run_example() -> pulse_desync::Result<()> {
    for topology in [
        TopologySpec::Ring { n: 6 },
        TopologySpec::ErdosRenyi { n: 8, p: 0.4, seed: Some(5) },
    ] {
        let mut config = Preset::Fig5a.config();
        config.topology = topology.clone();
        config.duration = 400.0;
        config.sample_interval = 0.1;
        let run = config.resolve()?.run()?;
        println!("{topology:?}");
        for e in &run.verdict.edges {
            println!(
                "  {}-{}  distance {:.3} (needs {:.3})  alternating {}",
                e.a + 1,
                e.b + 1,
                e.distance,
                e.threshold,
                e.alternating
            );
        }
        println!("  all edges desynchronized: {}", run.verdict.all_desynchronized());
    }
    Ok(())
}

fn main() -> pulse_desync::Result<()> {
    run_example()
}
