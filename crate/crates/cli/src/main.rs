fn main() {
    std::process::exit(quist_cli::run(std::env::args_os()));
}
