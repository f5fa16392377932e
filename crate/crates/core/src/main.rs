use std::io::Write;

fn main() {
    let (out, err, code) = pspoly::cli::run(std::env::args_os());
    if !out.is_empty() {
        let _ = writeln!(std::io::stdout().lock(), "{out}");
    }
    if !err.is_empty() {
        let _ = writeln!(std::io::stderr().lock(), "{}", err.trim_end());
    }
    std::process::exit(code);
}
