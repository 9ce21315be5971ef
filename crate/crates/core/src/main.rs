fn main() {
    std::process::exit(delta_floquet::cli::main_with_args(std::env::args_os()));
}
