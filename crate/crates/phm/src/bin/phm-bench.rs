fn main() {
    std::process::exit(phm::cli::run(std::env::args_os()));
}
