//! `fourphoton`: command-line front end for the four-photon family simulator.

mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fourphoton::tomo::Method;
use fourphoton::Error;

/// Simulate and analyze the tunable four-photon entangled family.
#[derive(Parser, Debug)]
#[command(name = "fourphoton", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive the post-selected state at one angle and compare with the closed form
    Derive {
        #[command(flatten)]
        gamma: GammaArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Tabulate amplitude, probability, class moduli and witness bound over [0, pi/4]
    Sweep {
        /// Number of angles, endpoints included
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the distinguished states of the family
    Catalog {
        #[command(flatten)]
        format: FormatArg,
    },
    /// Find the angles where two correlation classes meet
    Crossings {
        #[command(flatten)]
        format: FormatArg,
    },
    /// Print the non-zero correlations and the class moduli at one angle
    Correlations {
        #[command(flatten)]
        gamma: GammaArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Evaluate the generic witness and the setting cover at one angle
    Witness {
        #[command(flatten)]
        gamma: GammaArg,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Simulate 81-setting tomography, reconstruct, and report fidelity and witnesses
    Tomo {
        #[command(flatten)]
        gamma: GammaArg,
        /// Mean events per setting; omit for exact frequencies
        #[arg(long)]
        shots: Option<u64>,
        /// Seed of the count simulation
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Reconstruction: linear or physical
        #[arg(long, default_value = "physical")]
        method: Method,
        #[command(flatten)]
        noise: NoiseArgs,
        /// Directory for counts.csv and rho.json
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Fidelity under multi-pair emission, loss, distinguishability and white noise
    Noise {
        /// Single angle; without it the catalog states are evaluated
        #[arg(long, value_parser = parse_gamma, allow_hyphen_values = true)]
        gamma: Option<f64>,
        #[command(flatten)]
        noise: NoiseArgs,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct GammaArg {
    /// Wave-plate angle in radians, or a multiple of pi such as 0.125pi
    #[arg(long, value_parser = parse_gamma, allow_hyphen_values = true)]
    gamma: f64,
}

#[derive(Args, Debug)]
struct FormatArg {
    /// Emit JSON
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit an aligned text table (default)
    #[arg(long)]
    table: bool,
}

#[derive(Args, Debug, Default)]
struct NoiseArgs {
    /// JSON file with pair_probability, efficiency, visibility, depolarizing
    #[arg(long)]
    noise_json: Option<PathBuf>,
    /// Down-conversion strength tau (overrides the file)
    #[arg(long)]
    tau: Option<f64>,
    /// Per-photon detection efficiency (overrides the file)
    #[arg(long)]
    efficiency: Option<f64>,
    /// Two-photon interference visibility (overrides the file)
    #[arg(long)]
    visibility: Option<f64>,
    /// White-noise fraction (overrides the file)
    #[arg(long)]
    depolarizing: Option<f64>,
}

fn parse_gamma(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let value = if let Some(m) = t.strip_suffix("pi") {
        let m = m.trim();
        let factor = if m.is_empty() {
            1.0
        } else {
            m.parse::<f64>()
                .map_err(|_| format!("'{s}' is not a number or a multiple of pi"))?
        };
        factor * std::f64::consts::PI
    } else {
        t.parse::<f64>()
            .map_err(|_| format!("'{s}' is not a number or a multiple of pi"))?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GammaOutOfRange { .. }
        | Error::ParameterOutOfRange { .. }
        | Error::NoSolution { .. }
        | Error::Parse(_)
        | Error::Json(_) => 2,
        Error::Io(_) => 4,
        Error::Csv(c) if c.is_io_error() => 4,
        Error::Csv(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
