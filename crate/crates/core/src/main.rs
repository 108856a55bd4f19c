fn main() {
    std::process::exit(xwigner::cli::run(std::env::args_os()));
}
