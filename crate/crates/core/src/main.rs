use std::io::Write;

fn main() {
    let (text, code) = goid::cli::run(std::env::args_os());
    let result = if code == 3 {
        std::io::stderr().write_all(text.as_bytes())
    } else {
        std::io::stdout().write_all(text.as_bytes())
    };
    if result.is_err() {
        std::process::exit(3);
    }
    std::process::exit(code);
}
