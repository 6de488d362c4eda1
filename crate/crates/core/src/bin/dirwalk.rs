fn main() {
    std::process::exit(dirwalk::cli::main_with_env());
}
