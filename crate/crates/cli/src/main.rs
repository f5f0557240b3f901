use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use paretoscope_cli::{emit_report, parse_scenario, run_command, CliError, Command, Format, RunFlags};

/// Pareto efficiency under generalized preference transforms.
#[derive(Debug, Parser)]
#[command(name = "paretoscope", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// State for `efficient`: a zero-based feasible state id or an allocation such as `(1,2)`.
    #[arg(long)]
    state: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for `scan`.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Maximum number of ordered state pairs `scan` may examine.
    #[arg(long)]
    cap: Option<u64>,
}

fn run(args: &Args) -> Result<(), CliError> {
    let scenario = parse_scenario(&args.scenario)?;
    let flags = RunFlags {
        state: args.state.clone(),
        parallel: args.parallel,
        cap: args.cap,
    };
    let report = run_command(args.command, &scenario, &flags)?;
    let bytes = emit_report(&report, args.format);
    if args.format == Format::Csv {
        for d in &report.diagnostics {
            log::warn!("{d}");
        }
    }
    let io_error = |path: String| {
        move |e: std::io::Error| CliError::Io {
            path,
            message: e.to_string(),
        }
    };
    match &args.output {
        Some(path) => std::fs::write(path, bytes).map_err(io_error(path.display().to_string())),
        None => std::io::stdout().write_all(&bytes).map_err(io_error("stdout".into())),
    }
}

fn main() -> ExitCode {
    // the report already carries the engine's warnings as diagnostics
    env_logger::Builder::from_env(
        env_logger::Env::default().default_filter_or("paretoscope_core=off,paretoscope=warn"),
    )
    .init();
    // clap would exit with 2 on bad arguments, which is reserved for engine errors here
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
