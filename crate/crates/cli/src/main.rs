use clap::Parser;

use cppe_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    match cppe_cli::run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(cppe_cli::exit_code(&err));
        }
    }
}
