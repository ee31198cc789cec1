use clap::error::ErrorKind;
use clap::Parser;

mod geometry;
mod problem_file;
mod report;
mod run;

fn main() {
    let cli = match run::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(run::EXIT_OPTIMAL);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(run::EXIT_USAGE);
        }
    };
    std::process::exit(run::dispatch(cli));
}
