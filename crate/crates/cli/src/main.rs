fn main() {
    std::process::exit(gammasplit_cli::run(std::env::args_os()));
}
