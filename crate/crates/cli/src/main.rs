use std::path::PathBuf;
use std::process::ExitCode;

use canon_symmetry::commands::applicable;
use canon_symmetry::report::text;
use canon_symmetry::{gallery, run, Command, InputError, Options, Problem, Report};
use clap::Parser;
use serde::Serialize;

/// Check first integrals and symmetries of canonical systems.
#[derive(Debug, Parser)]
#[command(name = "canon-symmetry", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Problem file (JSON). Not needed with --gallery.
    problem: Option<PathBuf>,
    /// Write a machine-readable report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write drift series (one CSV per candidate) into this directory.
    #[arg(long, value_name = "DIR")]
    csv: Option<PathBuf>,
    /// Seed for the probabilistic zero test; overrides the problem file.
    #[arg(long)]
    seed: Option<u64>,
    /// Relative tolerance of the zero test.
    #[arg(long)]
    tol: Option<f64>,
    /// Run the command on every shipped example problem.
    #[arg(long)]
    gallery: bool,
}

#[derive(Serialize)]
struct GalleryReport<'a> {
    command: &'static str,
    reports: &'a [Report],
}

fn execute(cli: &Cli) -> Result<bool, InputError> {
    let opts = Options { seed: cli.seed, tolerance: cli.tol, csv_dir: cli.csv.clone() };
    let (problems, gallery_mode) = match (&cli.problem, cli.gallery) {
        (Some(_), true) => {
            return Err(InputError::Invalid {
                origin: "arguments".into(),
                message: "give either a problem file or --gallery, not both".into(),
            })
        }
        (Some(path), false) => (vec![Problem::load(path)?], false),
        (None, true) => (gallery::problems()?, true),
        (None, false) => {
            return Err(InputError::Invalid { origin: "arguments".into(), message: "missing problem file".into() })
        }
    };
    let mut reports = Vec::new();
    for problem in &problems {
        if gallery_mode && !applicable(cli.command, problem) {
            println!("{} [{}]  skipped: not applicable", cli.command.name(), problem.name);
            continue;
        }
        let report = run(cli.command, problem, &opts)?;
        print!("{}", text(&report));
        reports.push(report);
    }
    if let Some(path) = &cli.json {
        let body = if gallery_mode {
            serde_json::to_string_pretty(&GalleryReport { command: cli.command.name(), reports: &reports })
        } else {
            serde_json::to_string_pretty(&reports[0])
        }
        .expect("reports serialize");
        std::fs::write(path, body + "\n")
            .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    }
    Ok(reports.iter().all(Report::passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
