fn main() {
    std::process::exit(terra::cli::main_with_args(std::env::args_os()));
}
