fn main() {
    std::process::exit(lgi_cli::main_with_args(std::env::args_os()));
}
