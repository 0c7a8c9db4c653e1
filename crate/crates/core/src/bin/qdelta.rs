fn main() {
    std::process::exit(qdelta::cli::main_with_args(std::env::args_os()));
}
