fn main() -> std::process::ExitCode {
    modeloc::cli::run()
}
