fn main() {
    std::process::exit(depstat::cli::run(std::env::args_os()));
}
