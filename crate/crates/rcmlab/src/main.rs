fn main() {
    std::process::exit(rcmlab::cli::run(std::env::args_os()));
}
