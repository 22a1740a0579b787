use std::io::Write;

fn main() {
    let out = padic_channels::cli::run(std::env::args_os());
    // A closed pipe (e.g. `| head`) is not an error worth panicking over.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
