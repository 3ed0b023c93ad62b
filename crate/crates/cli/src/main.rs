use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nclorentz::{emit_report, resolve, run_scenario, CliError, FileConfig, Format, Overrides, SCENARIOS};

/// Runs a named scenario and writes its report.
///
/// Values are taken from flags first, then from the `--config` file, then
/// from built-in defaults.
#[derive(Debug, Parser)]
#[command(name = "nclorentz", version, after_help = scenario_help())]
struct Args {
    /// Scenario to run.
    scenario: Option<String>,
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_exponent)]
    p: Option<f64>,
    /// Second index; `inf` selects the weak space.
    #[arg(long, value_parser = parse_exponent)]
    q: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    lacunarity: Option<f64>,
    /// JSON step function or operator.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn scenario_help() -> String {
    format!("Scenarios: {}", SCENARIOS.join(", "))
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse().map_err(|e| format!("{e}")),
    }
}

fn run(args: Args) -> Result<bool, CliError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        scenario: args.scenario,
        p: args.p,
        q: args.q,
        n: args.n,
        seed: args.seed,
        samples: args.samples,
        lacunarity: args.lacunarity,
        input: args.input,
        out: args.out,
        format: args.format,
    };
    let cfg = resolve(flags, file)?;
    let report = run_scenario(&cfg)?;
    let io_err = |e: io::Error| CliError::Io(e.to_string());
    match &cfg.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(f);
            emit_report(&report, cfg.format, &mut w)?;
            w.flush().map_err(io_err)?;
        }
        None => {
            let mut out = io::stdout().lock();
            emit_report(&report, cfg.format, &mut out)?;
            out.flush().map_err(io_err)?;
        }
    }
    for c in report.failures() {
        eprintln!(
            "FAIL {}: value {} tolerance {}",
            c.name,
            c.value,
            c.tolerance.map_or("none".to_string(), |t| t.to_string())
        );
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("nclorentz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
