fn main() -> std::process::ExitCode {
    kachash::cli::main()
}
