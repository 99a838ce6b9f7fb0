use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use discord_witness::cli::{
    run_effective_dim, run_gibbs, run_haar_stats, run_pure_state, run_temperature_sweep, CliError,
    EffectiveDimConfig, GibbsConfig, HaarStatsConfig, PureStateConfig, StateSpec,
    TemperatureSweepConfig,
};
use discord_witness::linalg::BipartiteDims;
use discord_witness::witness::TimeGrid;

/// Local dephasing witness for bipartite quantum discord: seeded,
/// reproducible experiments with CSV output.
#[derive(Parser)]
#[command(name = "discord-witness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic sweep of the pure two-qubit family √z|00⟩ + √(1-z)|11⟩.
    PureState {
        #[arg(long, default_value_t = 0.0)]
        z_min: f64,
        #[arg(long, default_value_t = 1.0)]
        z_max: f64,
        #[arg(long, default_value_t = 101)]
        z_steps: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Witness trajectory for the Gibbs state of one seeded random Hamiltonian.
    Gibbs {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 2)]
        db: usize,
        /// Inverse temperature (k = 1).
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        #[arg(long, default_value_t = 50.0)]
        t_end: f64,
        #[arg(long, default_value_t = 500)]
        n_points: usize,
        /// Proceed with the deterministic tie-broken basis when the local
        /// state of A is degenerate.
        #[arg(long)]
        allow_degenerate: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Temperature dependence for one fixed seeded Hamiltonian.
    TemperatureSweep {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 8)]
        db: usize,
        /// Comma-separated inverse temperatures.
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.5,1,2")]
        betas: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        #[arg(long, default_value_t = 50.0)]
        t_end: f64,
        #[arg(long, default_value_t = 500)]
        n_points: usize,
        #[arg(long)]
        allow_degenerate: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo validation of the analytic Haar mean and variance.
    HaarStats {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 2)]
        db: usize,
        /// Use the pure family |Ψ_z⟩ at this z (2x2 only).
        #[arg(long, conflicts_with = "beta")]
        z: Option<f64>,
        /// Use the Gibbs state of a seeded random Hamiltonian at this beta.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 2000)]
        n_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        allow_degenerate: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Effective-dimension survey over seeded random Hamiltonians.
    EffectiveDim {
        #[arg(long, default_value_t = 2)]
        da: usize,
        #[arg(long, default_value_t = 8)]
        db: usize,
        #[arg(long, default_value_t = 10)]
        n_hamiltonians: usize,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        #[arg(long, default_value_t = 50.0)]
        t_end: f64,
        #[arg(long, default_value_t = 500)]
        n_points: usize,
        /// Replace every Hamiltonian by an uncoupled H_A ⊗ I + I ⊗ H_B,
        /// exercising the null-dynamics path.
        #[arg(long)]
        inject_uncoupled: bool,
        #[arg(long)]
        allow_degenerate: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn dims_of(da: usize, db: usize) -> Result<BipartiteDims, CliError> {
    BipartiteDims::new(da, db).map_err(|e| CliError::Config(e.to_string()))
}

fn grid_of(t_start: f64, t_end: f64, n_points: usize) -> Result<TimeGrid, CliError> {
    TimeGrid::new(t_start, t_end, n_points).map_err(|e| CliError::Config(e.to_string()))
}

// Render into memory, then emit. A runner that fails before writing anything
// leaves no file behind; one that fails after completing its output (the
// non-convergence exit) still delivers the finished CSV alongside the code.
fn dispatch(command: Command, buffer: &mut Vec<u8>) -> (Option<PathBuf>, Result<(), CliError>) {
    match command {
        Command::PureState {
            z_min,
            z_max,
            z_steps,
            output,
        } => {
            let result = run_pure_state(
                &PureStateConfig {
                    z_min,
                    z_max,
                    z_steps,
                },
                buffer,
            );
            (output, result)
        }
        Command::Gibbs {
            da,
            db,
            beta,
            seed,
            t_start,
            t_end,
            n_points,
            allow_degenerate,
            output,
        } => {
            let result = (|| {
                run_gibbs(
                    &GibbsConfig {
                        dims: dims_of(da, db)?,
                        beta,
                        seed,
                        grid: grid_of(t_start, t_end, n_points)?,
                        allow_degenerate,
                    },
                    buffer,
                )
            })();
            (output, result)
        }
        Command::TemperatureSweep {
            da,
            db,
            betas,
            seed,
            t_start,
            t_end,
            n_points,
            allow_degenerate,
            output,
        } => {
            let result = (|| {
                run_temperature_sweep(
                    &TemperatureSweepConfig {
                        dims: dims_of(da, db)?,
                        betas,
                        seed,
                        grid: grid_of(t_start, t_end, n_points)?,
                        allow_degenerate,
                    },
                    buffer,
                )
            })();
            (output, result)
        }
        Command::HaarStats {
            da,
            db,
            z,
            beta,
            n_samples,
            seed,
            allow_degenerate,
            output,
        } => {
            let result = (|| {
                let state = match (z, beta) {
                    (Some(z), None) => StateSpec::PureZ(z),
                    (None, Some(beta)) => StateSpec::Gibbs { beta },
                    (None, None) => {
                        return Err(CliError::Config(
                            "pick a state: --z <z> for the pure family or --beta <beta> for a \
                             seeded Gibbs state"
                                .into(),
                        ))
                    }
                    (Some(_), Some(_)) => unreachable!("clap rejects conflicting flags"),
                };
                run_haar_stats(
                    &HaarStatsConfig {
                        dims: dims_of(da, db)?,
                        state,
                        n_samples,
                        seed,
                        allow_degenerate,
                    },
                    buffer,
                )
            })();
            (output, result)
        }
        Command::EffectiveDim {
            da,
            db,
            n_hamiltonians,
            beta,
            seed,
            t_start,
            t_end,
            n_points,
            inject_uncoupled,
            allow_degenerate,
            output,
        } => {
            let result = (|| {
                run_effective_dim(
                    &EffectiveDimConfig {
                        dims: dims_of(da, db)?,
                        n_hamiltonians,
                        beta,
                        seed,
                        grid: grid_of(t_start, t_end, n_points)?,
                        inject_uncoupled,
                        allow_degenerate,
                    },
                    buffer,
                )
            })();
            (output, result)
        }
    }
}

fn emit(buffer: &[u8], output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, buffer).map_err(CliError::Io),
        None => std::io::stdout().write_all(buffer).map_err(CliError::Io),
    }
}

fn main() {
    let cli = Cli::parse();
    let mut buffer = Vec::new();
    let (output, result) = dispatch(cli.command, &mut buffer);
    if !buffer.is_empty() {
        if let Err(err) = emit(&buffer, output.as_ref()) {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
