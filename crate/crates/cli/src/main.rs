fn main() {
    let code = henon_cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
