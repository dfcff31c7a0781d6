fn main() {
    std::process::exit(dwcat::cli::main_with_args(std::env::args_os()));
}
