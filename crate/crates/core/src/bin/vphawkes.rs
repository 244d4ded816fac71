fn main() {
    std::process::exit(vphawkes::cli::cli_main(std::env::args_os()));
}
