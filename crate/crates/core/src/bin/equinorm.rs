fn main() {
    std::process::exit(equinorm::cli::run(std::env::args_os()));
}
