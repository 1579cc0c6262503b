fn main() {
    std::process::exit(fracgo::cli::main_with_args(std::env::args_os()));
}
