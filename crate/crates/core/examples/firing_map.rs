// The N-oscillator firing map: the relabelling matrix, and one full round of
// firings iterated to the desynchronized fixed point.

use pulse_desync::phasemap::{build_cyclic_transform, iterate_full_cycle, DifferenceState, IntMatrix};
use pulse_desync::SmoothLog;

pub fn run_example() -> pulse_desync::Result<()> {
    let t = build_cyclic_transform(4)?;
    println!("T* for N = 4:");
    for row in t.matrix().to_rows() {
        println!("  {row:?}");
    }
    let identity = IntMatrix::identity(3);
    println!("T*^4 is the identity: {}", t.matrix().pow(4) == identity);

    let f = SmoothLog::new(2.0)?;
    let d0 = DifferenceState::new(vec![0.05, 0.1, 0.3])?;
    let traj = iterate_full_cycle(&d0, 200, &f, 1e-12)?;
    for (k, d) in traj.states.iter().enumerate().take(4) {
        println!("round {k}: {d}");
    }
    println!("settled after {:?} rounds at {}", traj.converged_at, traj.last());
    Ok(())
}

fn main() -> pulse_desync::Result<()> {
    run_example()
}
