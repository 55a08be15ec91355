fn main() {
    std::process::exit(chaocrypt_cli::run(std::env::args_os()));
}
