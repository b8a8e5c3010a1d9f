fn main() {
    std::process::exit(pseudocone::cli::run(std::env::args().skip(1).collect()));
}
