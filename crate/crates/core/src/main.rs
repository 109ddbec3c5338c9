use std::io::{self, Write};

fn main() {
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = absinv::cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
