fn main() {
    std::process::exit(srq::cli::run_from_args(std::env::args_os()));
}
