use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use lumenplan::cli::{self, Scenario};
use lumenplan::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Safety,
    Backhaul,
    Coverage,
    Materials,
}

impl From<Command> for Scenario {
    fn from(c: Command) -> Self {
        match c {
            Command::Safety => Scenario::Safety,
            Command::Backhaul => Scenario::Backhaul,
            Command::Coverage => Scenario::Coverage,
            Command::Materials => Scenario::Materials,
        }
    }
}

/// Eye-safe power limits, MIMO backhaul rates and coverage maps for indoor laser links.
#[derive(Debug, Parser)]
#[command(name = "lumenplan", version)]
struct Args {
    /// Scenario to run.
    #[arg(value_enum)]
    scenario: Command,

    /// Flat `key = value` configuration file; omitted keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output file. Without it, data goes to stdout and summaries to stderr.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Print every configuration key with its default and exit.
    #[arg(long)]
    print_defaults: bool,
}

fn config_error(key: &str, message: String) -> Error {
    Error::Config {
        key: key.to_string(),
        line: 0,
        message,
    }
}

fn execute(args: Args) -> Result<(), Error> {
    let scenario = Scenario::from(args.scenario);
    if args.print_defaults {
        print!("{}", cli::print_defaults(scenario));
        return Ok(());
    }
    let text = match &args.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| config_error("--config", format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = cli::parse_config_for(&text, Some(scenario))?;
    cfg.output_path = args.out.clone();

    let out = cli::run(&cfg)?;

    match &cfg.output_path {
        Some(path) => {
            fs::write(path, &out.data)
                .map_err(|e| config_error("--out", format!("cannot write {}: {e}", path.display())))?;
            if let Some(summary) = &out.summary {
                print!("{summary}");
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&out.data)
                .and_then(|_| stdout.flush())
                .map_err(|e| config_error("--out", format!("cannot write stdout: {e}")))?;
            if let Some(summary) = &out.summary {
                eprint!("{summary}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lumenplan: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
