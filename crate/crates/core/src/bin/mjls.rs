fn main() {
    std::process::exit(mjls::cli::main_with(std::env::args_os()));
}
