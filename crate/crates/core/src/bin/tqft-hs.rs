fn main() {
    std::process::exit(tqft_hs::cli::run(std::env::args_os()));
}
