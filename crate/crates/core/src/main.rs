fn main() {
    std::process::exit(norden_geom::cli::main_with_args(std::env::args_os()));
}
