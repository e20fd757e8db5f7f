fn main() {
    std::process::exit(boolean_covers::cli::run(std::env::args_os()));
}
