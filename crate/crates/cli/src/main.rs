fn main() {
    std::process::exit(bicatfib_cli::run_command(std::env::args_os()));
}
