fn main() -> std::process::ExitCode {
    boolcomplex::cli::main()
}
