fn main() {
    std::process::exit(entropia::cli::run(std::env::args_os()));
}
