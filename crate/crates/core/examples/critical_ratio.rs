// How much frequency mismatch two oscillators tolerate before the faster one
// starts overtaking the slower one.

use pulse_desync::phasemap::critical_ratio;
use pulse_desync::SmoothLog;

pub fn run_example() -> pulse_desync::Result<()> {
    for gain in [1.0, 2.0, 3.0, 4.0] {
        let rc = critical_ratio(&SmoothLog::new(gain)?, 1e-4)?;
        println!("gain {gain}: rho_c = {:.4}", rc.rho_c);
    }
    Ok(())
}

fn main() -> pulse_desync::Result<()> {
    run_example()
}
