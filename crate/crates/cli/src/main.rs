fn main() {
    std::process::exit(latinca_cli::run(std::env::args_os()));
}
