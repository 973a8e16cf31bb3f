fn main() {
    std::process::exit(ied_cli::run());
}
