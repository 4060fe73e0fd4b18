fn main() {
    std::process::exit(alpha_bridge::cli::run(std::env::args_os()));
}
