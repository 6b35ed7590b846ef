fn main() {
    std::process::exit(inoue::cli::run());
}
