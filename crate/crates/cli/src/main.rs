use std::io::Write;

fn main() {
    let result = erdos_cli::run(std::env::args_os());
    // A closed pipe is not worth a panic.
    let _ = std::io::stdout().lock().write_all(result.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(result.stderr.as_bytes());
    std::process::exit(result.exit_code);
}
