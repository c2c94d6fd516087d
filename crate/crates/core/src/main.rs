fn main() {
    std::process::exit(landau_paraxial::cli::run(std::env::args_os()));
}
