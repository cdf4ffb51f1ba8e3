fn main() {
    std::process::exit(landauer_geo::cli::main_with_args(std::env::args_os()));
}
