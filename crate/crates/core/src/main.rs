fn main() {
    std::process::exit(whitealg::cli::run(std::env::args_os()));
}
