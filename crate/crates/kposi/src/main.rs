fn main() {
    std::process::exit(kposi::cli::run());
}
