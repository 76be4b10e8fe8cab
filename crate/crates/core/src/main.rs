fn main() {
    std::process::exit(double_well::cli::main());
}
