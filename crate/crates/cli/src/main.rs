use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fracslice::{run_scenario, CliError, RunConfig, ScenarioReport, Setup, REGISTRY};

#[derive(Parser)]
#[command(name = "fracslice", version, about = "Residual sweeps for fractional slice monogenic operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its report
    Run {
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run every scenario; with --out, write one report per scenario into that directory
    RunAll {
        #[command(flatten)]
        common: Common,
    },
    /// List the scenarios
    List,
}

#[derive(Args)]
struct Common {
    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "quad-order")]
    quad_order: Option<usize>,
    /// Tolerance override for one scenario, SCENARIO=VALUE; repeatable
    #[arg(long, value_name = "KEY=VAL")]
    tolerance: Vec<String>,
    /// Report file (run) or directory (run-all)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
}

impl Common {
    fn load(&self) -> Result<Setup, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(q) = self.quad_order {
            cfg.quad_order = q;
        }
        for t in &self.tolerance {
            let (k, v) = t.split_once('=').ok_or_else(|| CliError::Usage(format!("--tolerance expects KEY=VAL, got '{t}'")))?;
            cfg.set(&format!("tolerance.{}", k.trim()), v.trim())?;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        if let Some(f) = &self.format {
            cfg.format = f.parse()?;
        }
        cfg.validate()
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn run_one(name: &str, setup: &Setup) -> Result<bool, CliError> {
    let start = Instant::now();
    let report = run_scenario(name, setup)?;
    let text = report.render(setup.run.format);
    match &setup.run.out {
        Some(path) => write(path, &text)?,
        None => stdout(&text),
    }
    eprintln!("{}  [{:.1?}]", report.summary_line(), start.elapsed());
    Ok(report.pass)
}

fn run_all(setup: &Setup) -> Result<bool, CliError> {
    if let Some(dir) = &setup.run.out {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    let start = Instant::now();
    let mut reports: Vec<ScenarioReport> = Vec::with_capacity(REGISTRY.len());
    for s in REGISTRY {
        let t = Instant::now();
        let report = run_scenario(s.name, setup)?;
        stdout(&format!("{}\n", report.summary_line()));
        eprintln!("  {} took {:.1?}", s.name, t.elapsed());
        if let Some(dir) = &setup.run.out {
            let ext = setup.run.format.extension();
            write(&dir.join(format!("{}.{ext}", s.name)), &report.render(setup.run.format))?;
        }
        reports.push(report);
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    stdout(&format!("{} of {} scenarios passed\n", reports.len() - failed, reports.len()));
    eprintln!("total {:.1?}", start.elapsed());
    Ok(failed == 0)
}

/// A closed pipe (`| head`) is not an error worth a panic.
fn stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn list() {
    for s in REGISTRY {
        stdout(&format!("{:<24} tol {:<8e} {}\n{:<24} columns: {}\n", s.name, s.tolerance, s.description, "", s.columns));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::List => {
            list();
            return ExitCode::SUCCESS;
        }
        Command::Run { scenario, common } => common.load().and_then(|setup| run_one(scenario, &setup)),
        Command::RunAll { common } => common.load().and_then(|setup| run_all(&setup)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
