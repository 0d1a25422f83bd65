fn main() {
    std::process::exit(torus_mirror::cli::run(std::env::args_os()));
}
