fn main() {
    std::process::exit(imgtorque_cli::run(std::env::args_os()));
}
