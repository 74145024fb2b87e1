fn main() {
    std::process::exit(hyperelm::cli::main_with_args(std::env::args_os()));
}
