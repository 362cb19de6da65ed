fn main() {
    std::process::exit(permdeg::run(std::env::args_os()));
}
