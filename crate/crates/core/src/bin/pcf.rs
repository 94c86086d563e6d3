fn main() {
    std::process::exit(pcf::cli::run(std::env::args_os()));
}
