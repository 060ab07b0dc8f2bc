fn main() {
    std::process::exit(uhax::cli::main());
}
