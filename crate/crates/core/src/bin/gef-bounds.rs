fn main() {
    std::process::exit(gef_bounds::cli::run(std::env::args_os()));
}
