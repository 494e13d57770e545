fn main() {
    std::process::exit(defring::cli::main());
}
