fn main() {
    std::process::exit(prefnet::cli::main_with_args(std::env::args_os()));
}
