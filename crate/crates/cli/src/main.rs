fn main() {
    std::process::exit(vqgf_cli::run(std::env::args_os()));
}
