fn main() {
    std::process::exit(qaa_core::cli::main_with_args(std::env::args_os()));
}
