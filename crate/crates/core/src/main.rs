fn main() {
    std::process::exit(azishock::analysis_io::cli::run_cli(std::env::args_os()));
}
