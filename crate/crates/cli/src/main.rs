use clap::Parser;
use skewpencil_cli::{execute, render, Cli};

fn main() {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(cert) => {
            let out = render(&cert, cli.format);
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            std::process::exit(cert.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
