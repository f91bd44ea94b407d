fn main() {
    std::process::exit(krylov_agp::cli::main_with_args(std::env::args_os()));
}
