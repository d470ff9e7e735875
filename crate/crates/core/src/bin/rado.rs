fn main() {
    std::process::exit(rado_ramsey::cli::main_with(std::env::args_os()));
}
