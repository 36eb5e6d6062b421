fn main() {
    std::process::exit(hyplab::cli::main_with(std::env::args_os()));
}
