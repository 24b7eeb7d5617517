fn main() {
    std::process::exit(ffchain::cli::run(std::env::args_os()));
}
