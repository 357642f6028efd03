fn main() {
    let status = clocksync_cli::run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(status);
}
