use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tiltspdc::commands;
use tiltspdc::output::OutputFormat;
use tiltspdc::scenario::Scenario;

/// Joint-spectrum simulator for type-II SPDC with a pulse-front-tilted
/// pump: tilt-angle design, joint spectra, HOM traces, CW bandwidths, and
/// polarization-entanglement quality.
#[derive(Parser)]
#[command(name = "tiltspdc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (key = value with unit suffixes).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory for data files and the manifest.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override grid.points from the scenario.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Reserved for future stochastic extensions; accepted and recorded,
    /// never used.
    #[arg(long)]
    seed: Option<u64>,
    /// Grid output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Binary,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Binary => OutputFormat::Binary,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve/report the pulse-front tilt and suggest realizing gratings.
    TiltSolve(Common),
    /// Joint spectral intensity with diagonal spectra and diagnostics.
    Jsi(Common),
    /// Hong-Ou-Mandel coincidence trace.
    Hom(Common),
    /// CW signal spectrum, numeric and analytic branches.
    CwSpectrum(Common),
    /// Polarization-correlation curves.
    Polarization {
        #[command(flatten)]
        common: Common,
        /// Analyzer angles theta_a in degrees (repeatable).
        #[arg(long = "theta-a", default_values_t = [-45.0, -30.0], allow_negative_numbers = true)]
        theta_a: Vec<f64>,
        /// Relative phase Delta in degrees.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta: f64,
    },
}

fn run() -> tiltspdc::Result<()> {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::TiltSolve(c)
        | Command::Jsi(c)
        | Command::Hom(c)
        | Command::CwSpectrum(c)
        | Command::Polarization { common: c, .. } => c,
    };
    let mut scenario = Scenario::load(&common.scenario)?;
    commands::apply_overrides(&mut scenario, common.grid_points)?;
    match &cli.command {
        Command::TiltSolve(c) => commands::cmd_tilt_solve(&scenario, &c.out),
        Command::Jsi(c) => commands::cmd_jsi(&scenario, &c.out, c.format.into()),
        Command::Hom(c) => commands::cmd_hom(&scenario, &c.out),
        Command::CwSpectrum(c) => commands::cmd_cw_spectrum(&scenario, &c.out),
        Command::Polarization { common, theta_a, delta } => {
            commands::cmd_polarization(&scenario, &common.out, theta_a, delta.to_radians())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
