fn main() {
    std::process::exit(cext_cli::run(std::env::args_os()));
}
