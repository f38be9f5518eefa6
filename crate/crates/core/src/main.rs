fn main() {
    std::process::exit(tenkern::cli::run(std::env::args_os()));
}
