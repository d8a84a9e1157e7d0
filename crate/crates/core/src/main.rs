fn main() {
    std::process::exit(fair_kset::cli::run());
}
