fn main() {
    std::process::exit(epiconv::cli::run(std::env::args_os()));
}
