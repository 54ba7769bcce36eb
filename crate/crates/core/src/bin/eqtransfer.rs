fn main() {
    std::process::exit(eqtransfer::cli::main_with_args(std::env::args_os()));
}
