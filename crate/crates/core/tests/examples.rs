#[allow(dead_code)]
mod fixed_points {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fixed_points.rs"));
}

#[test]
fn fixed_points_example_runs() {
    fixed_points::run_example().expect("fixed points example should run");
}

#[allow(dead_code)]
mod two_oscillators {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/two_oscillators.rs"));
}

#[test]
fn two_oscillators_example_runs() {
    two_oscillators::run_example().expect("two oscillators example should run");
}

#[allow(dead_code)]
mod firing_map {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/firing_map.rs"));
}

#[test]
fn firing_map_example_runs() {
    firing_map::run_example().expect("firing map example should run");
}

#[allow(dead_code)]
mod orbit_census {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/orbit_census.rs"));
}

#[test]
fn orbit_census_example_runs() {
    orbit_census::run_example().expect("orbit census example should run");
}

#[allow(dead_code)]
mod critical_ratio {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/critical_ratio.rs"));
}

#[test]
fn critical_ratio_example_runs() {
    critical_ratio::run_example().expect("critical ratio example should run");
}

#[allow(dead_code)]
mod delay_trap {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/delay_trap.rs"));
}

#[test]
fn delay_trap_example_runs() {
    delay_trap::run_example().expect("delay trap example should run");
}

#[allow(dead_code)]
mod five_oscillators {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/five_oscillators.rs"));
}

#[test]
fn five_oscillators_example_runs() {
    five_oscillators::run_example().expect("five oscillators example should run");
}

#[allow(dead_code)]
mod sparse_networks {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sparse_networks.rs"));
}

#[test]
fn sparse_networks_example_runs() {
    sparse_networks::run_example().expect("sparse networks example should run");
}

#[allow(dead_code)]
mod scenario_file {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenario_file.rs"));
}

#[test]
fn scenario_file_example_runs() {
    scenario_file::run_example().expect("scenario file example should run");
}
