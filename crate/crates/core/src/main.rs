fn main() -> std::process::ExitCode {
    diskbsp::cli::main_with_args(std::env::args_os().collect())
}
