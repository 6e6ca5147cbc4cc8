fn main() {
    std::process::exit(nehari::cli::run_from_args(std::env::args_os()));
}
