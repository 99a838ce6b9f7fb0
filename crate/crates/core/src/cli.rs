//! Seeded experiment runners behind the command-line interface.
//!
//! Every runner writes a CSV stream that starts with a `#`-prefixed metadata
//! block (tool version, full configuration echo, seed, RNG identity) followed
//! by a header row and data rows. Floats are printed with 17 significant
//! digits so files round-trip losslessly and identical configurations produce
//! byte-identical output. All numbers come from the library operations; the
//! runners only orchestrate and format.

use std::io::Write;

use crate::dephasing::{
    dephasing_basis, geometric_discord_in_basis, local_dephase_allow_degenerate, DephasingBasis,
};
use crate::ensembles::{
    derived_stream, gibbs_state, rng_from_seed, sample_gue_hamiltonian,
    sample_uncoupled_hamiltonian, GibbsParams, RNG_IDENTITY,
};
use crate::error::Error;
use crate::haar::{gibbs_specialization, haar_stats, monte_carlo_stats};
use crate::linalg::{hs_norm_sq, pure_state_z, BipartiteDims, DensityMatrix, HermitianOperator};
use crate::witness::{
    effective_dimension_from_trajectory, witness_trajectory, TimeGrid, WitnessTrajectory,
};

/// Runner failure with the exit code contract of the binary:
/// 2 invalid configuration, 3 degenerate local state without override,
/// 4 non-convergence, 1 anything else.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Degenerate(String),
    NotConverged(String),
    Io(std::io::Error),
    Lib(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::NotConverged(_) => 4,
            CliError::Io(_) | CliError::Lib(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Degenerate(msg) => write!(f, "{msg}"),
            CliError::NotConverged(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateLocalState { .. } => CliError::Degenerate(e.to_string()),
            Error::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            Error::InvalidArgument(_) | Error::InvalidDims(_) | Error::InvalidTimeGrid(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Lib(other),
        }
    }
}

pub const TOOL_NAME: &str = "discord-witness";

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// 17-significant-digit float formatting; enough to reproduce any f64 exactly.
pub fn fmt_f(x: f64) -> String {
    format!("{:.16e}", x)
}

fn write_preamble(
    w: &mut impl Write,
    command: &str,
    config: &[(&str, String)],
) -> Result<(), CliError> {
    writeln!(w, "# tool: {TOOL_NAME} {}", tool_version())?;
    writeln!(w, "# command: {command}")?;
    for (key, value) in config {
        writeln!(w, "# {key}: {value}")?;
    }
    writeln!(w, "# rng: {RNG_IDENTITY}")?;
    Ok(())
}

/// FNV-1a over the little-endian bytes of the matrix entries, column-major,
/// real part then imaginary part. Used to fingerprint Hamiltonians.
pub fn matrix_fingerprint(h: &HermitianOperator) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    let mut absorb = |x: f64| {
        for b in x.to_le_bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
    };
    for z in h.matrix().iter() {
        absorb(z.re);
        absorb(z.im);
    }
    format!("{hash:016x}")
}

#[derive(Debug)]
struct PreparedState {
    rho: DensityMatrix,
    rho_prime: DensityMatrix,
    basis: DephasingBasis,
}

/// Diagonalize the A marginal and build the dephased reference state.
///
/// A degenerate marginal normally aborts with exit code 3, because dephasing
/// in an arbitrarily chosen eigenbasis can corrupt the witness. Two cases
/// proceed anyway: the caller passed `allow_degenerate`, or the state is
/// invariant under the tie-broken pinching (then it has zero discord no
/// matter which eigenbasis is picked, e.g. the maximally mixed state at
/// infinite temperature).
fn prepare_reference(
    rho: &DensityMatrix,
    allow_degenerate: bool,
    seed_note: &str,
) -> Result<PreparedState, CliError> {
    let basis = dephasing_basis(rho)?;
    let rho_prime = local_dephase_allow_degenerate(rho, &basis)?;
    if basis.is_degenerate() && !allow_degenerate {
        let moved = hs_norm_sq(&(rho.matrix() - rho_prime.matrix()));
        if moved >= 1e-12 {
            return Err(CliError::Degenerate(format!(
                "{seed_note}: local state of A is degenerate (smallest gap {:.3e}) and the state \
                 is not pinch-invariant; its eigenbasis is ambiguous. Rerun with \
                 --allow-degenerate to accept the deterministic tie-broken basis.",
                basis.min_gap()
            )));
        }
    }
    Ok(PreparedState {
        rho: rho.clone(),
        rho_prime,
        basis,
    })
}

fn basis_notes(w: &mut impl Write, basis: &DephasingBasis) -> Result<(), CliError> {
    writeln!(w, "# basis-degenerate: {}", basis.is_degenerate())?;
    writeln!(w, "# local-state-pure: {}", basis.is_local_state_pure())?;
    if basis.is_local_state_pure() {
        writeln!(
            w,
            "# note: the local state of A is pure, so the total state is a product state \
             and carries no correlations"
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct PureStateConfig {
    pub z_min: f64,
    pub z_max: f64,
    pub z_steps: usize,
}

/// Sweep the |Ψ_z⟩ family: discord, Haar mean and variance, and their ratio.
pub fn run_pure_state(cfg: &PureStateConfig, w: &mut impl Write) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&cfg.z_min) || !(0.0..=1.0).contains(&cfg.z_max) {
        return Err(CliError::Config("z range must lie within [0, 1]".into()));
    }
    if cfg.z_min >= cfg.z_max {
        return Err(CliError::Config(format!(
            "z-min ({}) must be below z-max ({})",
            cfg.z_min, cfg.z_max
        )));
    }
    if cfg.z_steps < 2 {
        return Err(CliError::Config("need at least 2 z steps".into()));
    }
    write_preamble(
        w,
        "pure-state",
        &[
            ("z-min", fmt_f(cfg.z_min)),
            ("z-max", fmt_f(cfg.z_max)),
            ("z-steps", cfg.z_steps.to_string()),
            ("seed", "none (analytic sweep)".into()),
        ],
    )?;
    writeln!(w, "z,D,mu,s2,sOverMu")?;
    let step = (cfg.z_max - cfg.z_min) / (cfg.z_steps - 1) as f64;
    for i in 0..cfg.z_steps {
        let z = cfg.z_min + step * i as f64;
        let rho = pure_state_z(z)?;
        // The family's eigenbasis degenerates at z = 1/2; the pinching there
        // is still the computational one, so the sweep runs ungated.
        let basis = dephasing_basis(&rho)?;
        let rho_prime = local_dephase_allow_degenerate(&rho, &basis)?;
        let discord = geometric_discord_in_basis(&rho, &basis)?;
        let stats = haar_stats(&rho, &rho_prime)?;
        let s_over_mu = if stats.mu > 0.0 {
            stats.s2.sqrt() / stats.mu
        } else {
            f64::NAN
        };
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f(z),
            fmt_f(discord),
            fmt_f(stats.mu),
            fmt_f(stats.s2),
            fmt_f(s_over_mu)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct GibbsConfig {
    pub dims: BipartiteDims,
    pub beta: f64,
    pub seed: u64,
    pub grid: TimeGrid,
    pub allow_degenerate: bool,
}

fn analytic_band(
    dims: BipartiteDims,
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
) -> Result<(f64, f64), CliError> {
    // Use the two-level reduction when it applies; it agrees with the general
    // formulas to rounding error.
    let (mu, s2) = if dims.da() == 2 {
        let delta = rho.matrix() - rho_prime.matrix();
        let spec = gibbs_specialization(dims.db(), &delta)?;
        (spec.mu, spec.s2)
    } else {
        let stats = haar_stats(rho, rho_prime)?;
        (stats.mu, stats.s2)
    };
    Ok((mu, s2))
}

/// One thermal state of a seeded random Hamiltonian: witness trajectory plus
/// the analytic Haar band and the effective dimension in the metadata.
pub fn run_gibbs(cfg: &GibbsConfig, w: &mut impl Write) -> Result<(), CliError> {
    let mut rng = rng_from_seed(cfg.seed);
    let h = sample_gue_hamiltonian(cfg.dims, &mut rng);
    let params = GibbsParams::new(cfg.beta, cfg.dims)?;
    let rho = gibbs_state(&h, &params)?;
    let prepared = prepare_reference(&rho, cfg.allow_degenerate, &format!("seed {}", cfg.seed))?;

    let discord = geometric_discord_in_basis(&prepared.rho, &prepared.basis)?;
    let (mu, s2) = analytic_band(cfg.dims, &prepared.rho, &prepared.rho_prime)?;
    let traj = witness_trajectory(&prepared.rho, &prepared.rho_prime, &h, &cfg.grid)?;
    let hs_delta_sq = hs_norm_sq(&(prepared.rho.matrix() - prepared.rho_prime.matrix()));
    let (d_eff, d_eff_converged) = match effective_dimension_from_trajectory(&traj, hs_delta_sq) {
        Ok(eff) => (eff.d_eff, true),
        Err(Error::TimeAverageZero) => (f64::NAN, false),
        Err(Error::NotConverged { d_eff, .. }) => (d_eff, false),
        Err(e) => return Err(e.into()),
    };

    write_preamble(
        w,
        "gibbs",
        &[
            ("da", cfg.dims.da().to_string()),
            ("db", cfg.dims.db().to_string()),
            ("beta", fmt_f(cfg.beta)),
            ("seed", cfg.seed.to_string()),
            ("t-start", fmt_f(cfg.grid.t_start())),
            ("t-end", fmt_f(cfg.grid.t_end())),
            ("n-points", cfg.grid.n_points().to_string()),
            ("allow-degenerate", cfg.allow_degenerate.to_string()),
        ],
    )?;
    writeln!(w, "# h-fingerprint: {}", matrix_fingerprint(&h))?;
    basis_notes(w, &prepared.basis)?;
    writeln!(w, "# D: {}", fmt_f(discord))?;
    writeln!(w, "# mu: {}", fmt_f(mu))?;
    writeln!(w, "# s: {}", fmt_f(s2.sqrt()))?;
    writeln!(w, "# time-average: {}", fmt_f(traj.time_average()))?;
    writeln!(w, "# d-eff: {}", fmt_f(d_eff))?;
    writeln!(w, "# d-eff-converged: {d_eff_converged}")?;
    writeln!(w, "t,dist")?;
    write_trajectory_rows(w, &traj)?;
    Ok(())
}

fn write_trajectory_rows(w: &mut impl Write, traj: &WitnessTrajectory) -> Result<(), CliError> {
    for (&t, &v) in traj.times().iter().zip(traj.values()) {
        writeln!(w, "{},{}", fmt_f(t), fmt_f(v))?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct TemperatureSweepConfig {
    pub dims: BipartiteDims,
    pub betas: Vec<f64>,
    pub seed: u64,
    pub grid: TimeGrid,
    pub allow_degenerate: bool,
}

/// Temperature dependence for one fixed seeded Hamiltonian: a summary block
/// (beta, D, mu, s) followed by one trajectory block per beta. Every block
/// echoes the same Hamiltonian fingerprint.
pub fn run_temperature_sweep(
    cfg: &TemperatureSweepConfig,
    w: &mut impl Write,
) -> Result<(), CliError> {
    if cfg.betas.is_empty() {
        return Err(CliError::Config("need at least one beta".into()));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let h = sample_gue_hamiltonian(cfg.dims, &mut rng);
    let fingerprint = matrix_fingerprint(&h);

    let mut betas_echo = String::new();
    for (i, b) in cfg.betas.iter().enumerate() {
        if i > 0 {
            betas_echo.push(',');
        }
        betas_echo.push_str(&fmt_f(*b));
    }

    struct Block {
        beta: f64,
        discord: f64,
        mu: f64,
        s: f64,
        traj: WitnessTrajectory,
    }
    let mut blocks = Vec::with_capacity(cfg.betas.len());
    for &beta in &cfg.betas {
        let params = GibbsParams::new(beta, cfg.dims)?;
        let rho = gibbs_state(&h, &params)?;
        let prepared = prepare_reference(
            &rho,
            cfg.allow_degenerate,
            &format!("seed {} beta {beta}", cfg.seed),
        )?;
        let discord = geometric_discord_in_basis(&prepared.rho, &prepared.basis)?;
        let (mu, s2) = analytic_band(cfg.dims, &prepared.rho, &prepared.rho_prime)?;
        let traj = witness_trajectory(&prepared.rho, &prepared.rho_prime, &h, &cfg.grid)?;
        blocks.push(Block {
            beta,
            discord,
            mu,
            s: s2.sqrt(),
            traj,
        });
    }

    write_preamble(
        w,
        "temperature-sweep",
        &[
            ("da", cfg.dims.da().to_string()),
            ("db", cfg.dims.db().to_string()),
            ("betas", betas_echo),
            ("seed", cfg.seed.to_string()),
            ("t-start", fmt_f(cfg.grid.t_start())),
            ("t-end", fmt_f(cfg.grid.t_end())),
            ("n-points", cfg.grid.n_points().to_string()),
            ("allow-degenerate", cfg.allow_degenerate.to_string()),
        ],
    )?;
    writeln!(w, "# h-fingerprint: {fingerprint}")?;
    writeln!(w, "# summary")?;
    writeln!(w, "beta,D,mu,s")?;
    for b in &blocks {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f(b.beta),
            fmt_f(b.discord),
            fmt_f(b.mu),
            fmt_f(b.s)
        )?;
    }
    for b in &blocks {
        writeln!(w, "# block: beta={}", fmt_f(b.beta))?;
        writeln!(w, "# h-fingerprint: {fingerprint}")?;
        writeln!(w, "t,dist")?;
        write_trajectory_rows(w, &b.traj)?;
    }
    Ok(())
}

/// State family for the Monte Carlo cross-check.
#[derive(Debug, Clone, Copy)]
pub enum StateSpec {
    /// |Ψ_z⟩ family; requires 2x2 dims.
    PureZ(f64),
    /// Thermal state of a seeded random Hamiltonian at this beta.
    Gibbs { beta: f64 },
}

#[derive(Debug, Clone)]
pub struct HaarStatsConfig {
    pub dims: BipartiteDims,
    pub state: StateSpec,
    pub n_samples: usize,
    pub seed: u64,
    pub allow_degenerate: bool,
}

/// Monte Carlo validation of the analytic Haar mean and variance.
pub fn run_haar_stats(cfg: &HaarStatsConfig, w: &mut impl Write) -> Result<(), CliError> {
    if cfg.n_samples < 2 {
        return Err(CliError::Config(format!(
            "need at least 2 samples, got {}",
            cfg.n_samples
        )));
    }
    let (rho, state_echo, family_basis) = match cfg.state {
        StateSpec::PureZ(z) => {
            if cfg.dims.da() != 2 || cfg.dims.db() != 2 {
                return Err(CliError::Config(format!(
                    "the pure-state family lives on 2x2 systems, got {}",
                    cfg.dims
                )));
            }
            // The family's dephasing basis is the computational one for every
            // z, including the degenerate midpoint, so no gate applies here.
            (pure_state_z(z)?, format!("psi-z(z={})", fmt_f(z)), true)
        }
        StateSpec::Gibbs { beta } => {
            // The state Hamiltonian draws from a stream far away from the
            // Monte Carlo chunk streams (which start at 0).
            let mut rng = derived_stream(cfg.seed, u64::MAX);
            let h = sample_gue_hamiltonian(cfg.dims, &mut rng);
            let params = GibbsParams::new(beta, cfg.dims)?;
            (
                gibbs_state(&h, &params)?,
                format!("gibbs(beta={})", fmt_f(beta)),
                false,
            )
        }
    };
    let prepared = prepare_reference(
        &rho,
        cfg.allow_degenerate || family_basis,
        &format!("seed {}", cfg.seed),
    )?;
    let analytic = haar_stats(&prepared.rho, &prepared.rho_prime)?;
    let mc = monte_carlo_stats(&prepared.rho, &prepared.rho_prime, cfg.n_samples, cfg.seed)?;
    let z_score = if mc.std_error > 0.0 {
        (mc.mean - analytic.mu) / mc.std_error
    } else if mc.mean == analytic.mu {
        0.0
    } else {
        f64::INFINITY.copysign(mc.mean - analytic.mu)
    };

    write_preamble(
        w,
        "haar-stats",
        &[
            ("da", cfg.dims.da().to_string()),
            ("db", cfg.dims.db().to_string()),
            ("state", state_echo),
            ("n-samples", cfg.n_samples.to_string()),
            ("seed", cfg.seed.to_string()),
            ("allow-degenerate", cfg.allow_degenerate.to_string()),
        ],
    )?;
    basis_notes(w, &prepared.basis)?;
    writeln!(
        w,
        "analyticMu,analyticS2,mcMean,mcVar,stdError,nSamples,zScore"
    )?;
    writeln!(
        w,
        "{},{},{},{},{},{},{}",
        fmt_f(analytic.mu),
        fmt_f(analytic.s2),
        fmt_f(mc.mean),
        fmt_f(mc.variance),
        fmt_f(mc.std_error),
        cfg.n_samples,
        fmt_f(z_score)
    )?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct EffectiveDimConfig {
    pub dims: BipartiteDims,
    pub n_hamiltonians: usize,
    pub beta: f64,
    pub seed: u64,
    pub grid: TimeGrid,
    pub inject_uncoupled: bool,
    pub allow_degenerate: bool,
}

/// Effective-dimension survey over seeded random Hamiltonians. Rows that hit
/// a zero time average (factorized dynamics) are flagged rather than fatal;
/// the run fails with the non-convergence exit code only when no Hamiltonian
/// with a signal reached a converged time average.
pub fn run_effective_dim(cfg: &EffectiveDimConfig, w: &mut impl Write) -> Result<(), CliError> {
    if cfg.n_hamiltonians == 0 {
        return Err(CliError::Config("need at least one Hamiltonian".into()));
    }
    write_preamble(
        w,
        "effective-dim",
        &[
            ("da", cfg.dims.da().to_string()),
            ("db", cfg.dims.db().to_string()),
            ("n-hamiltonians", cfg.n_hamiltonians.to_string()),
            ("beta", fmt_f(cfg.beta)),
            ("seed", cfg.seed.to_string()),
            ("t-start", fmt_f(cfg.grid.t_start())),
            ("t-end", fmt_f(cfg.grid.t_end())),
            ("n-points", cfg.grid.n_points().to_string()),
            ("inject-uncoupled", cfg.inject_uncoupled.to_string()),
            ("allow-degenerate", cfg.allow_degenerate.to_string()),
        ],
    )?;
    writeln!(w, "hIndex,timeAverage,dEff,converged")?;

    let mut finite_d_effs = Vec::new();
    let mut signal_rows = 0usize;
    let mut converged_rows = 0usize;
    for index in 0..cfg.n_hamiltonians {
        let mut rng = derived_stream(cfg.seed, index as u64);
        let h = if cfg.inject_uncoupled {
            sample_uncoupled_hamiltonian(cfg.dims, &mut rng)
        } else {
            sample_gue_hamiltonian(cfg.dims, &mut rng)
        };
        let params = GibbsParams::new(cfg.beta, cfg.dims)?;
        let rho = gibbs_state(&h, &params)?;
        let prepared = prepare_reference(
            &rho,
            cfg.allow_degenerate,
            &format!("seed {} hamiltonian {index}", cfg.seed),
        )?;
        let traj = witness_trajectory(&prepared.rho, &prepared.rho_prime, &h, &cfg.grid)?;
        let hs_delta_sq = hs_norm_sq(&(prepared.rho.matrix() - prepared.rho_prime.matrix()));
        let (d_eff, converged) = match effective_dimension_from_trajectory(&traj, hs_delta_sq) {
            Ok(eff) => {
                signal_rows += 1;
                converged_rows += 1;
                (eff.d_eff, true)
            }
            Err(Error::TimeAverageZero) => (f64::NAN, false),
            Err(Error::NotConverged { d_eff, .. }) => {
                signal_rows += 1;
                (d_eff, false)
            }
            Err(e) => return Err(e.into()),
        };
        if d_eff.is_finite() {
            finite_d_effs.push(d_eff);
        }
        writeln!(
            w,
            "{},{},{},{}",
            index,
            fmt_f(traj.time_average()),
            fmt_f(d_eff),
            converged
        )?;
    }

    let median = median_of(&mut finite_d_effs);
    writeln!(w, "# summary")?;
    writeln!(w, "medianDEff")?;
    writeln!(w, "{}", fmt_f(median))?;

    if signal_rows > 0 && converged_rows == 0 {
        return Err(CliError::NotConverged(format!(
            "none of the {signal_rows} Hamiltonians with a nonzero witness signal reached a \
             converged time average; extend --t-end"
        )));
    }
    Ok(())
}

fn median_of(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_lossless() {
        for &x in &[0.2, 1.0 / 3.0, 38.0 / 175.0, 1e-300, 123456.789] {
            let printed = fmt_f(x);
            let back: f64 = printed.parse().unwrap();
            assert_eq!(back, x, "{printed}");
        }
        assert_eq!(fmt_f(f64::NAN), "NaN");
    }

    #[test]
    fn median_rules() {
        assert!(median_of(&mut []).is_nan());
        assert_eq!(median_of(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median_of(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn pure_state_rejects_bad_ranges() {
        let mut out = Vec::new();
        let bad = PureStateConfig {
            z_min: 0.5,
            z_max: 0.5,
            z_steps: 10,
        };
        assert!(matches!(
            run_pure_state(&bad, &mut out),
            Err(CliError::Config(_))
        ));
        let bad = PureStateConfig {
            z_min: -0.1,
            z_max: 1.0,
            z_steps: 10,
        };
        assert!(matches!(
            run_pure_state(&bad, &mut out),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn fingerprint_is_stable_and_sensitive() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let mut rng = rng_from_seed(1);
        let h1 = sample_gue_hamiltonian(dims, &mut rng);
        let h2 = sample_gue_hamiltonian(dims, &mut rng);
        assert_eq!(matrix_fingerprint(&h1), matrix_fingerprint(&h1));
        assert_ne!(matrix_fingerprint(&h1), matrix_fingerprint(&h2));
    }

    #[test]
    fn degenerate_gate_distinguishes_invariant_states() {
        // Maximally mixed: degenerate marginal, but pinch-invariant, so the
        // run may proceed without the override.
        let dims = BipartiteDims::new(2, 2).unwrap();
        let mixed = crate::linalg::maximally_mixed(dims);
        assert!(prepare_reference(&mixed, false, "test").is_ok());

        // Bell state: degenerate marginal and genuinely basis-ambiguous.
        let bell = pure_state_z(0.5).unwrap();
        let err = prepare_reference(&bell, false, "test").unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(prepare_reference(&bell, true, "test").is_ok());
    }
}
