fn main() {
    std::process::exit(modcat::cli::run(std::env::args_os()));
}
