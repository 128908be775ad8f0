use clap::Parser;

use qroute_cli::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests land here too; those are not errors.
            let code = if err.use_stderr() { qroute_cli::EXIT_ERROR } else { qroute_cli::EXIT_OK };
            err.print().expect("failed to write diagnostics");
            std::process::exit(code);
        }
    };
    std::process::exit(qroute_cli::run(cli));
}
