fn main() {
    std::process::exit(qkdrate::cli::run(std::env::args_os()));
}
