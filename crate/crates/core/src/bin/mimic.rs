fn main() {
    std::process::exit(mimic::cli::main_with_args(std::env::args_os()));
}
