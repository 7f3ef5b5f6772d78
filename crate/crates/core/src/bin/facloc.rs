use std::io::Write;

fn main() {
    let (stdout, stderr, code) = facloc::cli::run_from_args(std::env::args_os());
    if !stdout.is_empty() {
        let _ = std::io::stdout().write_all(stdout.as_bytes());
    }
    if !stderr.is_empty() {
        eprintln!("{}", stderr.trim_end());
    }
    std::process::exit(code);
}
