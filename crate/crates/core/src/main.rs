fn main() {
    std::process::exit(tensorgeo::cli::run(std::env::args_os()));
}
