fn main() {
    std::process::exit(xy_cli::run(std::env::args_os()));
}
