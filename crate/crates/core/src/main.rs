fn main() {
    std::process::exit(cliffordlab::cli::run(std::env::args_os()));
}
