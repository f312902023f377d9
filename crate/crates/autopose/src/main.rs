fn main() {
    std::process::exit(autopose::cli::run());
}
