fn main() {
    std::process::exit(netfact::cli::run(std::env::args().skip(1)));
}
