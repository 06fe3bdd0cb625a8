fn main() -> std::process::ExitCode {
    sphw::cli::main()
}
