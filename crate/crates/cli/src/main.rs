//! `finkin` — generate, design and validate composite-linkage tail
//! kinematics from the command line.
//!
//! Exit codes: 0 success, 1 validation-suite failure, 2 input or
//! precondition error, 3 infeasible design, 4 I/O error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;
mod svg;
mod validate;

use output::OutputFormat;

#[derive(Parser)]
#[command(
    name = "finkin",
    version,
    about = "Carangiform tail kinematics: body waves, linkage simulation, design and gait sweeps",
    after_help = "Lengths are given in millimeters and angles in degrees unless --si is set,\n\
                  in which case the SI flag variants (meters, radians) must be used instead.\n\
                  All file output is deterministic: the same invocation produces identical bytes."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the body-wave midline and its amplitude envelope.
    Wave(WaveArgs),
    /// Simulate the mechanism tail motion over time.
    Simulate(SimulateArgs),
    /// Compute mechanism dimensions from target motion limits.
    Design(DesignArgs),
    /// Trace the pivot-C trajectory over one drive period.
    Path(PathArgs),
    /// Generate trajectory batches over a frequency/amplitude grid.
    Sweep(SweepArgs),
    /// Run the embedded cross-equation consistency suite.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output path; "-" writes to stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct WaveArgs {
    /// Interpret inputs in SI units (meters, radians).
    #[arg(long)]
    si: bool,
    /// Constant envelope term, mm.
    #[arg(long)]
    c1_mm: Option<f64>,
    /// Constant envelope term, m (requires --si).
    #[arg(long)]
    c1: Option<f64>,
    /// Linear envelope term, dimensionless.
    #[arg(long, default_value_t = 0.08)]
    c2: f64,
    /// Quadratic envelope term, 1/mm.
    #[arg(long)]
    c3_per_mm: Option<f64>,
    /// Quadratic envelope term, 1/m (requires --si).
    #[arg(long)]
    c3_per_m: Option<f64>,
    /// Body wavelength, mm.
    #[arg(long)]
    wavelength_mm: Option<f64>,
    /// Body wavelength, m (requires --si).
    #[arg(long)]
    wavelength_m: Option<f64>,
    /// Body length, mm. Required: it is not part of the wave data.
    #[arg(long)]
    body_length_mm: Option<f64>,
    /// Body length, m (requires --si).
    #[arg(long)]
    body_length_m: Option<f64>,
    /// Wave frequency, Hz.
    #[arg(long, default_value_t = 1.0)]
    freq_hz: f64,
    /// Stations along the body.
    #[arg(long, default_value_t = 100)]
    n_x: usize,
    /// Time slices over one period.
    #[arg(long, default_value_t = 8)]
    n_t: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MechanismArgs {
    /// Interpret inputs in SI units (meters, radians).
    #[arg(long)]
    si: bool,
    /// Crank 1 length, mm.
    #[arg(long)]
    l1_mm: Option<f64>,
    /// Crank 1 length, m (requires --si).
    #[arg(long)]
    l1_m: Option<f64>,
    /// Crank 2 length, mm (defaults to crank 1).
    #[arg(long)]
    l2_mm: Option<f64>,
    /// Crank 2 length, m (requires --si).
    #[arg(long)]
    l2_m: Option<f64>,
    /// Driving swing-arm length, mm.
    #[arg(long)]
    a_mm: Option<f64>,
    /// Driving swing-arm length, m (requires --si).
    #[arg(long)]
    a_m: Option<f64>,
    /// Driven swing-arm length, mm (defaults to the driving arm).
    #[arg(long)]
    b_mm: Option<f64>,
    /// Driven swing-arm length, m (requires --si).
    #[arg(long)]
    b_m: Option<f64>,
    /// Chute linkage m, mm (default 30).
    #[arg(long)]
    m_mm: Option<f64>,
    /// Chute linkage m, m (requires --si).
    #[arg(long)]
    m_m: Option<f64>,
    /// Chute linkage n, mm (defaults to m).
    #[arg(long)]
    n_mm: Option<f64>,
    /// Chute linkage n, m (requires --si).
    #[arg(long)]
    n_m: Option<f64>,
    /// Crank phase angle, degrees.
    #[arg(long)]
    phi_deg: Option<f64>,
    /// Crank phase angle, radians (requires --si).
    #[arg(long)]
    phi_rad: Option<f64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[command(flatten)]
    mechanism: MechanismArgs,
    /// Drive frequency, Hz.
    #[arg(long, default_value_t = 1.0)]
    freq_hz: f64,
    /// Simulated duration, seconds.
    #[arg(long, default_value_t = 1.0)]
    duration_s: f64,
    /// Time step, seconds.
    #[arg(long, default_value_t = 0.001)]
    dt_s: f64,
    /// Solve with the general route, allowing asymmetric mechanisms
    /// (derivative columns fall back to central differences).
    #[arg(long)]
    general: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct DesignArgs {
    /// Interpret inputs in SI units (meters, radians).
    #[arg(long)]
    si: bool,
    /// Target swing-angle limit, degrees.
    #[arg(long)]
    theta_max_deg: Option<f64>,
    /// Target swing-angle limit, radians (requires --si).
    #[arg(long)]
    theta_max_rad: Option<f64>,
    /// Target peduncle-translation limit, mm.
    #[arg(long)]
    h_max_mm: Option<f64>,
    /// Target peduncle-translation limit, m (requires --si).
    #[arg(long)]
    h_max_m: Option<f64>,
    /// Crank phase angle, degrees.
    #[arg(long)]
    phi_deg: Option<f64>,
    /// Crank phase angle, radians (requires --si).
    #[arg(long)]
    phi_rad: Option<f64>,
    /// Chute-linkage length, mm (default 30; no kinematic effect).
    #[arg(long)]
    chute_mm: Option<f64>,
    /// Chute-linkage length, m (requires --si).
    #[arg(long)]
    chute_m: Option<f64>,
    /// Output path; "-" writes to stdout. Always JSON.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct PathArgs {
    #[command(flatten)]
    mechanism: MechanismArgs,
    /// Drive frequency, Hz.
    #[arg(long, default_value_t = 1.0)]
    freq_hz: f64,
    /// Samples over one period.
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    /// Interpret inputs in SI units (meters, radians).
    #[arg(long)]
    si: bool,
    /// Drive frequencies, Hz (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "0.5,1.0,1.5,2.0")]
    freqs_hz: Vec<f64>,
    /// Swing-angle amplitudes, degrees (comma separated).
    #[arg(long, value_delimiter = ',')]
    amps_deg: Option<Vec<f64>>,
    /// Swing-angle amplitudes, radians (requires --si).
    #[arg(long, value_delimiter = ',')]
    amps_rad: Option<Vec<f64>>,
    /// Crank phase angle, degrees.
    #[arg(long)]
    phi_deg: Option<f64>,
    /// Crank phase angle, radians (requires --si).
    #[arg(long)]
    phi_rad: Option<f64>,
    /// Peak-to-peak lateral displacement 2*L1, mm (default 20).
    #[arg(long)]
    lateral_mm: Option<f64>,
    /// Peak-to-peak lateral displacement 2*L1, m (requires --si).
    #[arg(long)]
    lateral_m: Option<f64>,
    /// Samples per drive period.
    #[arg(long, default_value_t = 64)]
    samples_per_period: usize,
    /// Periods per series.
    #[arg(long, default_value_t = 1)]
    periods: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Emit a machine-readable JSON report instead of the text table.
    #[arg(long)]
    json: bool,
    /// Deliberately break the fixture (L2 = 1.01 * L1) to exercise the
    /// failure path.
    #[arg(long)]
    inject_asymmetry: bool,
}

/// Application-level failure, carrying the process exit code.
#[derive(Debug)]
enum CliError {
    /// Invalid input or violated precondition (exit 2).
    Input(String),
    /// No mechanism satisfies the requested limits (exit 3).
    Infeasible(String),
    /// Filesystem failure (exit 4).
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Infeasible(m) | CliError::Io(m) => m,
        }
    }
}

impl From<finkin_core::Error> for CliError {
    fn from(e: finkin_core::Error) -> Self {
        match e {
            finkin_core::Error::Infeasible(_) => CliError::Infeasible(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Wave(args) => commands::wave(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Design(args) => commands::design(&args),
        Command::Path(args) => commands::path(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Validate(args) => commands::run_validate(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
