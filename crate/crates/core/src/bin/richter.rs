fn main() {
    std::process::exit(richter::cli::main_from_args(std::env::args_os()));
}
