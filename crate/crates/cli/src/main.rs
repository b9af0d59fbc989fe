fn main() {
    std::process::exit(slk::run(std::env::args_os()));
}
