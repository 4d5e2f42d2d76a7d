use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use magiclim::scenario::{
    demo_paper_block, emit_report, fixture, run_scenario, run_scenario_text, Format, Mode, Report, RunOptions,
    ScenarioError,
};

#[derive(Parser)]
#[command(name = "magiclim", version, about = "Verify projective limits, Hopf structures and magic unitaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Arithmetic: exact rationals or tolerance-based floats.
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Tolerance for float mode.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,
    /// Worker threads for independent checks.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (`-` reads standard input).
    Verify { scenario: PathBuf },
    /// Print a built-in scenario as JSON.
    Fixture { name: String },
    /// Run a built-in pipeline.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Block grid of `m` rank-one projections at truncation `K`.
    PaperBlock {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long = "K", default_value_t = 4)]
        k: usize,
        /// Append flip gadgets on consecutive basis vectors.
        #[arg(long)]
        gadgets: bool,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: ScenarioError| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn read_scenario(path: &PathBuf) -> Result<String, String> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(text)
}

fn execute(cli: &Cli) -> Result<Option<Report>, ScenarioError> {
    let opts = RunOptions { mode: cli.mode, tol: cli.tol, env_mode: std::env::var("MAGICLIM_MODE").ok() };
    match &cli.command {
        Command::Verify { scenario } => {
            let text = read_scenario(scenario).map_err(|message| ScenarioError::Input { path: "scenario".into(), message })?;
            Ok(Some(run_scenario_text(&text, &opts)?))
        },
        Command::Fixture { name } => {
            let s = fixture(name)?;
            emit(&serde_json::to_string_pretty(&s).expect("scenarios serialize"));
            Ok(None)
        }
        Command::Demo { demo: Demo::PaperBlock { m, k, gadgets } } => {
            Ok(Some(run_scenario(&demo_paper_block(*m, *k, *gadgets), false, &opts)?))
        }
    }
}

/// A closed downstream pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 || rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().is_err() {
            eprintln!("error: --jobs must be a positive integer");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            emit(&emit_report(&report, cli.format));
            if report.expectations_met() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
