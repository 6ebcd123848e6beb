fn main() {
    std::process::exit(hecke_core::cli::run(std::env::args_os()));
}
