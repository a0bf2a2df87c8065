fn main() {
    std::process::exit(ruinflow::cli::main_with_args(std::env::args_os()));
}
