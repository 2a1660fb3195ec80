fn main() {
    std::process::exit(meshqos::cli::run_cli(std::env::args_os()));
}
