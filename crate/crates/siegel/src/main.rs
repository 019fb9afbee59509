fn main() {
    std::process::exit(siegel::cli::main_with_args(std::env::args_os()));
}
