fn main() {
    std::process::exit(xyent_cli::main_with_args(std::env::args_os()));
}
