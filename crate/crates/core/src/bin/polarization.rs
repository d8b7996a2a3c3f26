fn main() {
    std::process::exit(polarization::experiments::cli(std::env::args_os()));
}
