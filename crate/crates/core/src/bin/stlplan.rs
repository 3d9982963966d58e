fn main() {
    std::process::exit(stlplan::cli::main_with_args(std::env::args_os()));
}
