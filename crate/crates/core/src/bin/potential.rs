fn main() {
    std::process::exit(potential_core::cli::run_cli(std::env::args_os()));
}
