fn main() {
    std::process::exit(psystem::cli::run(std::env::args_os()));
}
