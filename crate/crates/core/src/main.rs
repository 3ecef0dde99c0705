fn main() {
    std::process::exit(mutsched::cli::main());
}
