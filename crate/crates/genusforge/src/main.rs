fn main() {
    std::process::exit(genusforge::cli::run(std::env::args_os()));
}
