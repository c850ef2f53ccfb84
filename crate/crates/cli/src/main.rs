fn main() {
    std::process::exit(pwa_cli::app::run(std::env::args_os()));
}
