use clap::error::ErrorKind;
use clap::Parser;
use matmoment_cli::{run, Cli, EXIT_INVALID};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MATMOMENT_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(&cli));
}
