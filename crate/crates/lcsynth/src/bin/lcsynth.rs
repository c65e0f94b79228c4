fn main() {
    std::process::exit(lcsynth::cli::run(std::env::args().skip(1).collect()));
}
