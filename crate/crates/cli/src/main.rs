fn main() {
    std::process::exit(pgk_cli::main_with(std::env::args_os()));
}
