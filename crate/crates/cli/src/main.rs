fn main() {
    std::process::exit(extbc_cli::main_with(std::env::args_os()));
}
