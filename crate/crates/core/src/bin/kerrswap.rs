fn main() {
    std::process::exit(kerrswap::cli::run(std::env::args_os()));
}
