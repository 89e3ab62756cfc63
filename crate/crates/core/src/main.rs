fn main() {
    std::process::exit(batched_bandits::cli::main_with_args(std::env::args_os()));
}
