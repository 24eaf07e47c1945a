fn main() {
    std::process::exit(entrocone::experiment::main_with_args(std::env::args_os()));
}
