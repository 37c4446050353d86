//! `peskin` — run the canned filament experiments from the command line.
//!
//! Exit codes: 0 on success, 1 on argument/config errors, 2 when the
//! simulated curve degenerates (self-contact); partial outputs are still
//! written in that case.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use peskin::error::Error;
use peskin::experiments::{
    cmd_convergence, cmd_decay, cmd_fields, cmd_simulate, cmd_spectrum, parse_init_flag,
    ExperimentSpec, Report,
};

#[derive(Parser)]
#[command(
    name = "peskin",
    version,
    about = "Elastic filament in 2D Stokes flow: spectral boundary-integral experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a curve and write its trajectory trace plus snapshots.
    Simulate(CommonArgs),
    /// Long-horizon run with decay-rate fits of the slow-mode complement.
    Decay(CommonArgs),
    /// Rayleigh quotients of the linearized operator at the unit circle.
    Spectrum(CommonArgs),
    /// Velocity/pressure field on a grid around the curve.
    Fields(CommonArgs),
    /// Temporal Richardson triple and spatial-accuracy table.
    Convergence(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Simulate(a)
            | Command::Decay(a)
            | Command::Spectrum(a)
            | Command::Fields(a)
            | Command::Convergence(a) => a,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Grid size (even, ≥ 8).
    #[arg(long)]
    n: Option<usize>,

    /// Time step.
    #[arg(long)]
    dt: Option<f64>,

    /// Final time.
    #[arg(long)]
    t_final: Option<f64>,

    /// Initial curve: demo | unlabeled | labeled:M | circle:A,B[,C1,C2] | fourier:SEED.
    #[arg(long)]
    init: Option<String>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn resolve_spec(args: &CommonArgs) -> Result<ExperimentSpec, Error> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidArgument(format!("cannot read config {}: {e}", path.display()))
            })?;
            ExperimentSpec::from_json(&text)?
        }
        None => ExperimentSpec::default(),
    };
    if let Some(n) = args.n {
        spec.n = n;
    }
    if let Some(dt) = args.dt {
        spec.dt = dt;
    }
    if let Some(t) = args.t_final {
        spec.t_final = Some(t);
    }
    if let Some(init) = &args.init {
        spec.init = Some(parse_init_flag(init)?);
    }
    if let Some(out) = &args.out {
        spec.out = out.clone();
    }
    Ok(spec)
}

fn dispatch(command: &Command, spec: &ExperimentSpec) -> Result<Report, Error> {
    match command {
        Command::Simulate(_) => cmd_simulate(spec),
        Command::Decay(_) => cmd_decay(spec),
        Command::Spectrum(_) => cmd_spectrum(spec),
        Command::Fields(_) => cmd_fields(spec),
        Command::Convergence(_) => cmd_convergence(spec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's default exit code for usage errors is 2, which this tool
            // reserves for degeneracy aborts; remap usage errors to 1.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let spec = match resolve_spec(cli.command.args()) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match dispatch(&cli.command, &spec) {
        Ok(report) => {
            println!("wrote {}", report.summary_path.display());
            if report.degenerate {
                eprintln!("run degenerated; partial outputs were written");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_degeneracy() { 2 } else { 1 })
        }
    }
}
