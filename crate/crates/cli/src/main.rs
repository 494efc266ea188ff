fn main() {
    std::process::exit(semistar_cli::run());
}
