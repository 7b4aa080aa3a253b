//! `qgeo` — batch interface to the distinguishability-geometry library.
//!
//! Six subcommands expose the library's main computations:
//!
//! * `distance` — fidelity, Bures distance/angle, and interferometric
//!   distances between two density-matrix files;
//! * `thermal-sweep` — closed-form metric tensors of the thermal spin-1/2
//!   over a `(beta, omega_z)` grid, with degeneracy diagnostics;
//! * `mc-analyze` — normalization, self-inversiveness, and operator-
//!   monotonicity verdicts for the metric-generating candidate functions;
//! * `monotonicity` — randomized contractivity audit of a distance under
//!   random CPTP channels;
//! * `geodesic` — closed-form geodesic lengths between Bloch-ball
//!   endpoints;
//! * `sample` — random density matrices from the trace-induced ensemble.
//!
//! # Exit codes
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | invalid input: flags, settings file, or state files |
//! | 3 | valid input hit a degenerate or ambiguous spectral configuration |
//! | 4 | internal numerical failure (non-convergence, step control) |
//!
//! Usage errors raised by the argument parser itself also exit with 2.
//!
//! # Determinism
//!
//! Every command is a pure function of its resolved options: stochastic
//! commands (`mc-analyze`, `monotonicity`, `sample`) require an explicit
//! `--seed` and stream all randomness from counter-based generators keyed
//! on it, so reruns reproduce results byte for byte, including across the
//! parallel trial loop.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;

use commands::{
    DistanceParams, GeodesicParams, GridSpec, McParams, MonotonicityParams, SampleParams,
    ThermalSweepParams,
};
use config::Settings;
use output::OutputFormat;

/// Process-level failure, carrying the exit code class.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, settings, or input files. Exit code 2.
    Validation(String),
    /// Valid input with a degenerate or ambiguous spectral configuration.
    /// Exit code 3.
    Degenerate(String),
    /// Internal numerical failure. Exit code 4.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Degenerate(msg) | CliError::Numerical(msg) => {
                write!(out, "{msg}")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<qgeo::Error> for CliError {
    fn from(e: qgeo::Error) -> Self {
        use qgeo::Error as E;
        let msg = e.to_string();
        match e {
            E::DegenerateSpectrum { .. } | E::AmbiguousBranchMatching { .. } => {
                CliError::Degenerate(msg)
            }
            E::StepTooLarge { .. }
            | E::SingularMatrix { .. }
            | E::NumericalFailure { .. }
            | E::KrausIncomplete { .. } => CliError::Numerical(msg),
            _ => CliError::Validation(msg),
        }
    }
}

/// Top-level argument grammar.
///
/// Every option that has a settings-file counterpart is declared optional
/// here; required-ness is enforced after flags and file are merged, so a
/// value may come from either source.
#[derive(Debug, Parser)]
#[command(
    name = "qgeo",
    version,
    about = "Distinguishability geometry of mixed quantum states: interferometric and Bures \
             metrics, thermal closed forms, monotonicity diagnostics, Bloch-ball geodesics."
)]
pub struct Cli {
    /// Flat `key = value` settings file; command-line flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// RNG seed; required by mc-analyze, monotonicity, and sample.
    #[arg(long, global = true, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Output format: json (default) or csv.
    #[arg(long, global = true, value_name = "FMT")]
    pub format: Option<String>,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Relative eigenvalue-gap threshold below which a spectrum counts as
    /// degenerate.
    #[arg(long = "tol-degeneracy", global = true, value_name = "TOL")]
    pub tol_degeneracy: Option<f64>,

    /// Planck-constant scale for the thermal models (natural units: 1).
    #[arg(long, global = true, value_name = "HBAR")]
    pub hbar: Option<f64>,

    /// Boltzmann-constant scale converting supplied inverse temperatures
    /// to inverse energies (natural units: 1).
    #[arg(long, global = true, value_name = "KB")]
    pub kb: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity and distances between two density-matrix files.
    Distance {
        /// JSON file with the first density matrix.
        #[arg(long = "state-a", value_name = "PATH")]
        state_a: Option<PathBuf>,
        /// JSON file with the second density matrix.
        #[arg(long = "state-b", value_name = "PATH")]
        state_b: Option<PathBuf>,
    },
    /// Thermal spin-1/2 metric tensors over a (beta, omega_z) grid.
    ThermalSweep {
        /// Transverse field component (default 0).
        #[arg(long = "omega-x", value_name = "W")]
        omega_x: Option<f64>,
        /// Transverse field component (default 0).
        #[arg(long = "omega-y", value_name = "W")]
        omega_y: Option<f64>,
        #[arg(long = "omega-z-start", value_name = "W")]
        omega_z_start: Option<f64>,
        #[arg(long = "omega-z-stop", value_name = "W")]
        omega_z_stop: Option<f64>,
        #[arg(long = "omega-z-steps", value_name = "N")]
        omega_z_steps: Option<usize>,
        /// Inverse temperature, in 1/temperature units (divided by kb).
        #[arg(long = "beta-start", value_name = "B")]
        beta_start: Option<f64>,
        #[arg(long = "beta-stop", value_name = "B")]
        beta_stop: Option<f64>,
        #[arg(long = "beta-steps", value_name = "N")]
        beta_steps: Option<usize>,
    },
    /// Metric-generating candidate-function diagnostics.
    McAnalyze {
        /// Exponent of the one-parameter family member to analyze
        /// alongside the two fixed functions (default 2).
        #[arg(long, value_name = "NU")]
        nu: Option<f64>,
        /// Randomized operator-monotonicity trials per function
        /// (default 10000).
        #[arg(long, value_name = "N")]
        trials: Option<usize>,
        /// Matrix dimension for the randomized search (default 2).
        #[arg(long, value_name = "D")]
        dim: Option<usize>,
    },
    /// Randomized contractivity audit under CPTP channels.
    Monotonicity {
        /// Quantity to audit: bures-distance, bures-angle,
        /// interferometric-distance, or fidelity.
        #[arg(long, value_name = "Q")]
        quantity: Option<String>,
        /// System dimension (default 2).
        #[arg(long, value_name = "D")]
        dim: Option<usize>,
        /// Environment dimension of the sampled channels (default 2).
        #[arg(long = "env-dim", value_name = "D")]
        env_dim: Option<usize>,
        /// Number of independent trials (default 1000).
        #[arg(long, value_name = "N")]
        trials: Option<usize>,
    },
    /// Closed-form geodesic lengths between Bloch-ball endpoints.
    Geodesic {
        /// Radius of the first endpoint, in [0, 1].
        #[arg(long = "r-a", value_name = "R")]
        r_a: Option<f64>,
        /// Radius of the second endpoint, in [0, 1].
        #[arg(long = "r-b", value_name = "R")]
        r_b: Option<f64>,
        /// Polar angle of the second endpoint relative to the first, in
        /// [0, pi].
        #[arg(long = "theta-b", value_name = "RAD")]
        theta_b: Option<f64>,
    },
    /// Random density matrices from the trace-induced ensemble (json only).
    Sample {
        /// Hilbert-space dimension (default 2).
        #[arg(long, value_name = "D")]
        dim: Option<usize>,
        /// Number of states to draw (default 1).
        #[arg(long, value_name = "N")]
        count: Option<usize>,
    },
}

/// A fully rendered report plus where to put it and how to exit.
#[derive(Debug)]
pub struct Outcome {
    pub payload: String,
    pub out: Option<PathBuf>,
    pub exit_code: i32,
}

fn required_f64(v: Option<f64>, key: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| {
        CliError::Validation(format!(
            "missing required option `--{key}` (or settings key `{key}`)"
        ))
    })
}

fn required_usize(v: Option<usize>, key: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| {
        CliError::Validation(format!(
            "missing required option `--{key}` (or settings key `{key}`)"
        ))
    })
}

fn required_seed(v: Option<u64>, command: &str) -> Result<u64, CliError> {
    v.ok_or_else(|| {
        CliError::Validation(format!(
            "`{command}` is stochastic: provide --seed (or settings key `seed`)"
        ))
    })
}

fn resolve_path(
    settings: &mut Settings,
    key: &str,
    flag: Option<PathBuf>,
) -> Result<PathBuf, CliError> {
    let from_file = settings.take_string(key, None)?;
    flag.or(from_file.map(PathBuf::from)).ok_or_else(|| {
        CliError::Validation(format!(
            "missing required option `--{key}` (or settings key `{key}`)"
        ))
    })
}

fn positive_scale(value: f64, name: &str) -> Result<f64, CliError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(CliError::Validation(format!(
            "`{name}` must be finite and positive, got {value}"
        )));
    }
    Ok(value)
}

/// Merges flags with the settings file, runs the subcommand, and returns
/// the rendered report. Pure apart from reading the state files named in
/// `distance`; all output happens in the caller.
pub fn execute(cli: Cli, config_text: Option<&str>) -> Result<Outcome, CliError> {
    let mut settings = Settings::from_text(config_text)?;

    // Global options are consumed first so they are never reported as
    // unknown keys, whatever the subcommand.
    let seed = settings.take_u64("seed", cli.seed)?;
    let format = match settings.take_string("format", cli.format)? {
        None => OutputFormat::Json,
        Some(s) => s.parse::<OutputFormat>().map_err(CliError::Validation)?,
    };
    let out = {
        let from_file = settings.take_string("out", None)?;
        cli.out.or(from_file.map(PathBuf::from))
    };
    let tol_degeneracy = settings
        .take_f64("tol-degeneracy", cli.tol_degeneracy)?
        .unwrap_or(qgeo::tol::DEGENERACY_REL_DEFAULT);
    if !(tol_degeneracy.is_finite() && tol_degeneracy >= 0.0) {
        return Err(CliError::Validation(format!(
            "`tol-degeneracy` must be finite and nonnegative, got {tol_degeneracy}"
        )));
    }
    let hbar = positive_scale(settings.take_f64("hbar", cli.hbar)?.unwrap_or(1.0), "hbar")?;
    let kb = positive_scale(settings.take_f64("kb", cli.kb)?.unwrap_or(1.0), "kb")?;

    let (payload, exit_code) = match cli.command {
        Command::Distance { state_a, state_b } => {
            let state_a = resolve_path(&mut settings, "state-a", state_a)?;
            let state_b = resolve_path(&mut settings, "state-b", state_b)?;
            settings.finish()?;
            commands::run_distance(&DistanceParams {
                state_a,
                state_b,
                tol_degeneracy,
                format,
            })?
        }
        Command::ThermalSweep {
            omega_x,
            omega_y,
            omega_z_start,
            omega_z_stop,
            omega_z_steps,
            beta_start,
            beta_stop,
            beta_steps,
        } => {
            let omega_x = settings.take_f64("omega-x", omega_x)?.unwrap_or(0.0);
            let omega_y = settings.take_f64("omega-y", omega_y)?.unwrap_or(0.0);
            let oz_start = required_f64(
                settings.take_f64("omega-z-start", omega_z_start)?,
                "omega-z-start",
            )?;
            let oz_stop = required_f64(
                settings.take_f64("omega-z-stop", omega_z_stop)?,
                "omega-z-stop",
            )?;
            let oz_steps = required_usize(
                settings.take_usize("omega-z-steps", omega_z_steps)?,
                "omega-z-steps",
            )?;
            let b_start =
                required_f64(settings.take_f64("beta-start", beta_start)?, "beta-start")?;
            let b_stop = required_f64(settings.take_f64("beta-stop", beta_stop)?, "beta-stop")?;
            let b_steps =
                required_usize(settings.take_usize("beta-steps", beta_steps)?, "beta-steps")?;
            settings.finish()?;
            commands::run_thermal_sweep(&ThermalSweepParams {
                omega_x,
                omega_y,
                omega_z: GridSpec::new("omega-z", oz_start, oz_stop, oz_steps)?,
                beta: GridSpec::new("beta", b_start, b_stop, b_steps)?,
                hbar,
                kb,
                format,
            })?
        }
        Command::McAnalyze { nu, trials, dim } => {
            let nu = settings.take_f64("nu", nu)?.unwrap_or(2.0);
            let trials = settings.take_usize("trials", trials)?.unwrap_or(10_000);
            let dim = settings.take_usize("dim", dim)?.unwrap_or(2);
            let seed = required_seed(seed, "mc-analyze")?;
            settings.finish()?;
            commands::run_mc_analyze(&McParams {
                nu,
                dim,
                trials,
                seed,
                format,
            })?
        }
        Command::Monotonicity {
            quantity,
            dim,
            env_dim,
            trials,
        } => {
            let quantity_name = settings
                .take_string("quantity", quantity)?
                .ok_or_else(|| {
                    CliError::Validation(
                        "missing required option `--quantity` (or settings key `quantity`)"
                            .to_string(),
                    )
                })?;
            let quantity = commands::parse_quantity(&quantity_name)?;
            let dim = settings.take_usize("dim", dim)?.unwrap_or(2);
            let env_dim = settings.take_usize("env-dim", env_dim)?.unwrap_or(2);
            let trials = settings.take_usize("trials", trials)?.unwrap_or(1000);
            let seed = required_seed(seed, "monotonicity")?;
            settings.finish()?;
            commands::run_monotonicity(&MonotonicityParams {
                quantity,
                dim,
                env_dim,
                trials,
                seed,
                format,
            })?
        }
        Command::Geodesic { r_a, r_b, theta_b } => {
            let r_a = required_f64(settings.take_f64("r-a", r_a)?, "r-a")?;
            let r_b = required_f64(settings.take_f64("r-b", r_b)?, "r-b")?;
            let theta_b = required_f64(settings.take_f64("theta-b", theta_b)?, "theta-b")?;
            settings.finish()?;
            commands::run_geodesic(&GeodesicParams {
                r_a,
                r_b,
                theta_b,
                format,
            })?
        }
        Command::Sample { dim, count } => {
            let dim = settings.take_usize("dim", dim)?.unwrap_or(2);
            let count = settings.take_usize("count", count)?.unwrap_or(1);
            let seed = required_seed(seed, "sample")?;
            settings.finish()?;
            commands::run_sample(&SampleParams {
                dim,
                count,
                seed,
                format,
            })?
        }
    };

    Ok(Outcome {
        payload,
        out,
        exit_code,
    })
}
