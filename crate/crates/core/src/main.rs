fn main() {
    std::process::exit(agref::cli::main());
}
