use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    match ffkit::cli::run(&argv) {
        Ok(stdout) => {
            // a closed pipe (e.g. piping into head) is not an error
            let mut out = std::io::stdout().lock();
            if out.write_all(stdout.as_bytes()).is_err() || out.flush().is_err() {
                std::process::exit(0);
            }
        }
        Err(failure) => {
            eprintln!("{}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
