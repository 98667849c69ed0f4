fn main() {
    std::process::exit(ortho3::cli::run());
}
