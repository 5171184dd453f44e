fn main() {
    std::process::exit(spiral_spectrum::cli::run_from_env());
}
