// Random orderings of N identical oscillators each settle onto the attractor
// of their own cyclic firing order: (N - 1)! of them.

use pulse_desync::phasemap::{count_orbit_classes, enumerate_attractors};
use pulse_desync::SmoothLog;

pub fn run_example() -> pulse_desync::Result<()> {
    let f = SmoothLog::new(2.0)?;
    for n in 2..=4 {
        let census = enumerate_attractors(n, 300, 1, &f)?;
        println!(
            "N = {n}: {} orders found, {} expected, {:.1}% of samples converged",
            census.orbits.len(),
            count_orbit_classes(n)?,
            100.0 * census.convergence_rate()
        );
        for o in &census.orbits {
            println!(
                "  {:?}  d* = {}  |lambda|max = {:.4}",
                o.firing_order, o.fixed_point, o.multipliers[0]
            );
        }
    }
    Ok(())
}

fn main() -> pulse_desync::Result<()> {
    run_example()
}
