fn main() {
    std::process::exit(trimer::cli::run(std::env::args_os()));
}
