fn main() {
    std::process::exit(covfun_cli::run());
}
