fn main() -> std::process::ExitCode {
    work_entropy::cli::main()
}
