use std::io;

fn main() {
    let status = bordism_core::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(status);
}
