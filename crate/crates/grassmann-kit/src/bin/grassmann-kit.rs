fn main() {
    std::process::exit(grassmann_kit::cli::run());
}
