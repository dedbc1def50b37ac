fn main() {
    std::process::exit(transonic::cli::run(std::env::args_os()));
}
