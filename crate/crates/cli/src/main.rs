fn main() {
    std::process::exit(cbinom_cli::cli_main(std::env::args_os()));
}
