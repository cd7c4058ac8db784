fn main() {
    std::process::exit(finitype::cli::run(std::env::args_os()));
}
