fn main() {
    std::process::exit(gowers::cli::run(std::env::args_os()));
}
