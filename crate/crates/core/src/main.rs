fn main() {
    std::process::exit(starflow::cli::main());
}
