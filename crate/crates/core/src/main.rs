fn main() {
    std::process::exit(rffkit::cli::run(std::env::args_os()));
}
