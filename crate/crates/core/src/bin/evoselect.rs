fn main() {
    std::process::exit(evoselect::cli::main());
}
