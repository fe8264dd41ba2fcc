fn main() {
    std::process::exit(symkernel::cli::run(std::env::args_os()));
}
