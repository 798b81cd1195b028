fn main() {
    std::process::exit(cyclic_orbit::cli::main_with_args());
}
