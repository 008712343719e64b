//! Command-line front end: configure an experiment, run the classical or
//! quantum pipeline, and emit machine-readable tables with analytic
//! reference columns and convergence estimates.
//!
//! Exit codes: 0 on success, 1 on numerical failures, 2 on configuration
//! errors (including flag parsing).

mod commands;
mod output;
mod settings;

use clap::{Parser, Subcommand};
use commands::{ClassicalArgs, CliError, RhoArgs};
use settings::{resolve_common, CommonArgs};

#[derive(Parser)]
#[command(
    name = "polchannel",
    about = "Free-space polarization channel simulator: fluxes, reduced density matrices, and Doppler boosts",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyzer flux scan for a tilted component or a Gaussian beam profile.
    Classical {
        #[command(flatten)]
        common: CommonArgs,
        /// Source polarization angle (e.g. 45deg or 0.785rad).
        #[arg(long)]
        a: Option<String>,
        /// Fixed analyzer angle metadata only; the scan always covers b.
        #[arg(long)]
        b: Option<String>,
        /// Tilt of the single component (ignored with --rms).
        #[arg(long)]
        theta: Option<String>,
        /// Azimuth of the single component.
        #[arg(long)]
        phi: Option<String>,
        /// Profile rms tilt; turns on Gaussian-profile averaging.
        #[arg(long)]
        rms: Option<String>,
        /// Number of analyzer angles in the scan.
        #[arg(long)]
        b_points: Option<usize>,
        /// Observer velocity; reports the aberrated tilt in the metadata.
        #[arg(long, allow_hyphen_values = true)]
        velocity: Option<f64>,
    },
    /// Reduced polarization density matrix of a wave packet (optionally boosted).
    Rho {
        #[command(flatten)]
        common: CommonArgs,
        /// Relative radial spread delta_r / k_A of the canonical packet.
        #[arg(long)]
        omega: Option<f64>,
        /// Observer velocity along the axis.
        #[arg(long, allow_hyphen_values = true)]
        velocity: Option<f64>,
        /// Boost route: a/substitution or b/rotation.
        #[arg(long)]
        method: Option<String>,
        /// Helicity sign (+1 or -1).
        #[arg(long, allow_hyphen_values = true)]
        helicity: Option<i8>,
        /// Linear polarization angle instead of a helicity eigenstate.
        #[arg(long)]
        linear_angle: Option<String>,
        /// Monte Carlo cross-check sample count (0 disables).
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Helstrom error of the circular pair across radial spreads.
    PeScan {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated list of spreads.
        #[arg(long, value_delimiter = ',')]
        omegas: Option<Vec<f64>>,
    },
    /// Boosted-to-rest error ratio across observer velocities.
    DopplerScan {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated list of velocities.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        velocities: Option<Vec<f64>>,
        /// Radial spread of the packet pair.
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Off-diagonal entries rebuilt from POVM expectations vs direct quadrature.
    Reconstruct {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        helicity: Option<i8>,
        #[arg(long)]
        linear_angle: Option<String>,
    },
    /// Witness that an approaching observer's map is not completely positive.
    CpWitness {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, allow_hyphen_values = true)]
        velocity: Option<f64>,
        #[arg(long)]
        omega: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classical {
            common,
            a,
            b,
            theta,
            phi,
            rms,
            b_points,
            velocity,
        } => {
            let resolved = resolve_common(&common)?;
            commands::run_classical(
                &resolved,
                &ClassicalArgs {
                    a,
                    b,
                    theta,
                    phi,
                    rms,
                    b_points,
                    velocity,
                },
            )
        }
        Command::Rho {
            common,
            omega,
            velocity,
            method,
            helicity,
            linear_angle,
            mc_samples,
        } => {
            let resolved = resolve_common(&common)?;
            commands::run_rho(
                &resolved,
                &RhoArgs {
                    omega,
                    velocity,
                    method,
                    helicity,
                    linear_angle,
                    mc_samples,
                },
            )
        }
        Command::PeScan { common, omegas } => {
            let resolved = resolve_common(&common)?;
            commands::run_pe_scan(&resolved, &omegas)
        }
        Command::DopplerScan {
            common,
            velocities,
            omega,
        } => {
            let resolved = resolve_common(&common)?;
            commands::run_doppler_scan(&resolved, &velocities, omega)
        }
        Command::Reconstruct {
            common,
            omega,
            helicity,
            linear_angle,
        } => {
            let resolved = resolve_common(&common)?;
            commands::run_reconstruct(
                &resolved,
                &RhoArgs {
                    omega,
                    velocity: None,
                    method: None,
                    helicity,
                    linear_angle,
                    mc_samples: None,
                },
            )
        }
        Command::CpWitness {
            common,
            velocity,
            omega,
        } => {
            let resolved = resolve_common(&common)?;
            commands::run_cp_witness(&resolved, velocity, omega)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Config(e)) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("numerical failure: {}", e.0);
            std::process::exit(1);
        }
    }
}
