//! Binary entry point: parse arguments, read the optional settings file,
//! run the subcommand, emit the report, exit with the class code.

use clap::Parser;

use qgeo_cli::{execute, output, Cli};

fn main() {
    let cli = Cli::parse();
    let config_text = match cli.config.clone().map(std::fs::read_to_string).transpose() {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read settings file: {e}");
            std::process::exit(2);
        }
    };
    match execute(cli, config_text.as_deref()) {
        Ok(outcome) => {
            if let Err(e) = output::emit(&outcome.payload, outcome.out.as_deref()) {
                eprintln!("error: {e}");
                std::process::exit(e.exit_code());
            }
            std::process::exit(outcome.exit_code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
