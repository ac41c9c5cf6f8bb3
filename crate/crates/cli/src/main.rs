use std::io::Write;

use clap::Parser;
use orderlab_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let (out, err) = orderlab_cli::run(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    if let Some(e) = err {
        eprintln!("{e}");
    }
    std::process::exit(out.code);
}
