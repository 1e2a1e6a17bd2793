fn main() {
    std::process::exit(pulse_desync::cli::main_with(std::env::args_os()));
}
