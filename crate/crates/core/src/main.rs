fn main() {
    std::process::exit(dirac_bezout::cli::run(std::env::args_os()));
}
