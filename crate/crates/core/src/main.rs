fn main() {
    std::process::exit(optcwt::cli::run(std::env::args_os()));
}
