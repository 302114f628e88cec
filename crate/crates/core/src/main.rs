fn main() {
    std::process::exit(rescodim::cli::run(std::env::args_os()));
}
