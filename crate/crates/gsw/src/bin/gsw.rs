fn main() {
    std::process::exit(gsw::cli::main_with(std::env::args_os()));
}
