fn main() {
    std::process::exit(unicritical::cli::run(std::env::args_os()));
}
