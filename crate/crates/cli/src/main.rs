fn main() {
    std::process::exit(qeuler_cli::main_entry());
}
