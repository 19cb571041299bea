fn main() {
    std::process::exit(hitomezashi::cli::run(std::env::args()));
}
