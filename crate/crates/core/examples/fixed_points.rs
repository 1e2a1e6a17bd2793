// Fixed points of the two built-in interaction families, and the monotonicity
// check that rules out bad cubic parameters.

use pulse_desync::interaction::{classify_fixed_points, validate_circle_map};
use pulse_desync::{InteractionFunction, ShiftedCubic, SmoothLog};

fn report<F: InteractionFunction>(f: &F) {
    println!("{}", f.describe());
    for p in classify_fixed_points(f) {
        println!(
            "  x = {:.6}  f'(x) = {:.6}  {:?}",
            p.location.value(),
            p.multiplier,
            p.stability
        );
    }
}

pub fn run_example() -> pulse_desync::Result<()> {
    report(&SmoothLog::new(2.0)?);
    report(&SmoothLog::new(5.0)?);
    report(&ShiftedCubic::new(0.1, 0.5)?);

    // some (tau, beta) pairs fold the circle back on itself
    match ShiftedCubic::new(0.3, 0.95) {
        Ok(_) => println!("(0.3, 0.95) accepted"),
        Err(e) => println!("(0.3, 0.95) rejected: {e}"),
    }
    let folded = ShiftedCubic::new_unchecked(0.3, 0.95)?;
    let check = validate_circle_map(&folded);
    if let Some(x) = check.first_slope_violation() {
        println!("  slope first turns non-positive near x = {x:.4}");
    }
    Ok(())
}

fn main() -> pulse_desync::Result<()> {
    run_example()
}
