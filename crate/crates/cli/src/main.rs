use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pathlight_cli::output::{csv_string, manifest_path, write_stdout, write_text, Manifest};
use pathlight_cli::verify::format_row;
use pathlight_cli::{parse_config, run, verify, CliError, Format, Suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "pathlight", version, about = "Path-integral detection probabilities for sheets and spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scan described by a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output file, or `-` for standard output.
        #[arg(long)]
        output: Option<String>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check results against closed-form and pinned reference values.
    Verify {
        /// `all` or a scenario name.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        samples_per_cycle: Option<u32>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn run_command(config: PathBuf, output: Option<String>, format: Option<FormatArg>, workers: Option<usize>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&config).map_err(|e| CliError::io(&config, e))?;
    let mut cfg = parse_config(&text)?;
    if let Some(o) = output {
        cfg.output = Some(o);
    }
    if let Some(f) = format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if workers.is_some() {
        cfg.workers = workers;
    }
    cfg.validate()?;
    let warnings = run::warnings(&cfg);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let scan = run::execute(&cfg)?;
    let manifest = Manifest::new(&cfg, &scan, warnings);
    let body = match cfg.format {
        Format::Csv => csv_string(&scan),
        Format::Json => manifest.to_json(),
    };
    match cfg.output.as_deref() {
        None | Some("-") => write_stdout(&body)?,
        Some(path) => {
            let path = PathBuf::from(path);
            write_text(&path, &body)?;
            if cfg.format == Format::Csv {
                write_text(&manifest_path(&path), &manifest.to_json())?;
            }
        }
    }
    eprintln!("{}", run::summary(&scan));
    Ok(())
}

fn verify_command(suite: String, report: Option<PathBuf>, samples_per_cycle: Option<u32>, workers: Option<usize>) -> Result<bool, CliError> {
    let suite: Suite = suite.parse()?;
    let r = verify(suite, VerifyOptions { samples_per_cycle, workers }, true)?;
    let json = r.to_json();
    match report {
        Some(path) => write_text(&path, &json)?,
        None => write_stdout(&json)?,
    }
    let failed: Vec<_> = r.failures().collect();
    eprintln!("{} checks, {} failed, {:.1} s", r.rows.len(), failed.len(), r.duration_s);
    for row in failed {
        eprintln!("  {}", format_row(row));
    }
    Ok(r.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, output, format, workers } => run_command(config, output, format, workers).map(|_| true),
        Command::Verify { suite, report, samples_per_cycle, workers } => verify_command(suite, report, samples_per_cycle, workers),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
