fn main() {
    std::process::exit(fcodes::cli::run(std::env::args_os()));
}
