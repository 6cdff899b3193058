fn main() {
    std::process::exit(ellembed::cli::main_with_args(std::env::args_os()));
}
