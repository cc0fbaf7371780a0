fn main() {
    std::process::exit(ifsdim_cli::run(std::env::args_os()));
}
