fn main() {
    std::process::exit(shor_entanglement::cli::run(std::env::args_os()));
}
