fn main() {
    std::process::exit(boundgen::cli::main_with_args(std::env::args_os()));
}
