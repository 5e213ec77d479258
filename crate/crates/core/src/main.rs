fn main() {
    std::process::exit(freesurf::cli_io::run_cli(std::env::args_os()));
}
