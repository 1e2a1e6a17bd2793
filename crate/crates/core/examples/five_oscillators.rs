// The four built-in five-oscillator runs: identical or spread-out periods,
// with or without a small delay.

use pulse_desync::cli::summary_line;
use pulse_desync::engine::{run_preset, Preset};

pub fn run_example() -> pulse_desync::Result<()> {
    for preset in Preset::ALL {
        let run = run_preset(preset)?;
        let p0 = run.order_parameter.rows[0].1;
        println!("{preset}: P(0) = {p0:.4}; {}", summary_line(&run));
    }
    Ok(())
}

fn main() -> pulse_desync::Result<()> {
    run_example()
}
