//! The witness trajectory dist(t) = ‖Tr_B{U_t (ρ-ρ') U_t†}‖² under unitary
//! or Kraus-map evolution, its long-time average, and the effective-dimension
//! estimate obtained by inverting the analytic Haar mean at that average.
//!
//! dist(0) vanishes because dephasing preserves the marginals; any positive
//! value at a later time certifies nonzero discord in ρ. Uncoupled dynamics
//! (factorized propagators) yield no signal at any time.

use crate::error::Error;
use crate::linalg::{
    eigh_raw, hs_norm_sq, max_abs_entry, partial_trace_b_matrix, tol, BipartiteDims, CMatrix,
    DensityMatrix, HermitianOperator, UnitaryOperator, C64,
};

/// Uniform time grid on [t_start, t_end] with n_points samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self, Error> {
        if !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidTimeGrid("endpoints must be finite".into()));
        }
        if t_start < 0.0 {
            return Err(Error::InvalidTimeGrid(format!(
                "t_start must be non-negative, got {t_start}"
            )));
        }
        if t_end <= t_start {
            return Err(Error::InvalidTimeGrid(format!(
                "t_end ({t_end}) must exceed t_start ({t_start})"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidTimeGrid(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            n_points,
        })
    }

    /// Default experiment window: comfortably past the relaxation time of
    /// unit-variance random Hamiltonians at the dimensions this crate targets.
    pub fn default_experiment() -> Self {
        Self {
            t_start: 0.0,
            t_end: 50.0,
            n_points: 500,
        }
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn times(&self) -> Vec<f64> {
        let step = (self.t_end - self.t_start) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| self.t_start + step * i as f64)
            .collect()
    }
}

/// Sampled witness distances over a time grid, with their arithmetic mean.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessTrajectory {
    times: Vec<f64>,
    values: Vec<f64>,
    time_average: f64,
    dims: BipartiteDims,
}

impl WitnessTrajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time_average(&self) -> f64 {
        self.time_average
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }
}

fn check_pair(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    other: BipartiteDims,
    what: &str,
) -> Result<(), Error> {
    let dims = rho.dims();
    if rho_prime.dims() != dims || other != dims {
        return Err(Error::InvalidDims(format!(
            "dims mismatch: state {}, reference {}, {what} {other}",
            dims,
            rho_prime.dims(),
        )));
    }
    Ok(())
}

/// dist for a single unitary: ‖Tr_B{U Δ U†}‖².
pub fn witness_distance(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    u: &UnitaryOperator,
) -> Result<f64, Error> {
    check_pair(rho, rho_prime, u.dims(), "unitary")?;
    let delta = rho.matrix() - rho_prime.matrix();
    let evolved = u.matrix() * delta * u.matrix().adjoint();
    Ok(hs_norm_sq(&partial_trace_b_matrix(&evolved, rho.dims())))
}

/// dist(t) over a grid, driven by U_t = exp(-i H t).
///
/// A single eigendecomposition of H serves the whole trajectory: in the
/// eigenbasis, conjugation by U_t multiplies Δ entrywise by the phase factors
/// e^{-i(λ_m - λ_n)t}.
pub fn witness_trajectory(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    h: &HermitianOperator,
    grid: &TimeGrid,
) -> Result<WitnessTrajectory, Error> {
    check_pair(rho, rho_prime, h.dims(), "Hamiltonian")?;
    let dims = rho.dims();
    let d = dims.total();
    let delta = rho.matrix() - rho_prime.matrix();
    let (vals, vecs) = eigh_raw(h.matrix());
    let delta_tilde = vecs.adjoint() * delta * &vecs;

    let times = grid.times();
    let mut values = Vec::with_capacity(times.len());
    let mut scaled = CMatrix::zeros(d, d);
    for &t in &times {
        let phases: Vec<C64> = vals.iter().map(|&l| C64::new(0.0, -l * t).exp()).collect();
        for m in 0..d {
            for n in 0..d {
                scaled[(m, n)] = delta_tilde[(m, n)] * phases[m] * phases[n].conj();
            }
        }
        let evolved = &vecs * &scaled * vecs.adjoint();
        values.push(hs_norm_sq(&partial_trace_b_matrix(&evolved, dims)));
    }
    let time_average = values.iter().sum::<f64>() / values.len() as f64;
    Ok(WitnessTrajectory {
        times,
        values,
        time_average,
        dims,
    })
}

/// Completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    operators: Vec<CMatrix>,
    dims: BipartiteDims,
}

impl KrausMap {
    pub fn new(operators: Vec<CMatrix>, dims: BipartiteDims) -> Result<Self, Error> {
        if operators.is_empty() {
            return Err(Error::InvalidArgument("empty Kraus set".into()));
        }
        let d = dims.total();
        if operators.iter().any(|k| k.nrows() != d || k.ncols() != d) {
            return Err(Error::InvalidDims(format!(
                "every Kraus operator must be {d}x{d} for dims {dims}"
            )));
        }
        let mut sum = CMatrix::zeros(d, d);
        for k in &operators {
            sum += k.adjoint() * k;
        }
        let dev = max_abs_entry(&(sum - CMatrix::identity(d, d)));
        if dev > tol::UNITARY {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        Ok(Self { operators, dims })
    }

    pub fn from_unitary(u: &UnitaryOperator) -> Self {
        Self {
            operators: vec![u.matrix().clone()],
            dims: u.dims(),
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// Λ(X) = Σ_α K_α X K_α†.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.dims.total();
        let mut out = CMatrix::zeros(d, d);
        for k in &self.operators {
            out += k * x * k.adjoint();
        }
        out
    }
}

/// dist for a dynamical map: ‖Tr_B{Λ(Δ)}‖².
pub fn witness_distance_kraus(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    map: &KrausMap,
) -> Result<f64, Error> {
    check_pair(rho, rho_prime, map.dims(), "Kraus map")?;
    let delta = rho.matrix() - rho_prime.matrix();
    Ok(hs_norm_sq(&partial_trace_b_matrix(
        &map.apply(&delta),
        rho.dims(),
    )))
}

/// Convergence bookkeeping for the long-time average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceDiagnostics {
    /// Average over the full grid.
    pub full_average: f64,
    /// Average over the first half of the grid (window halved).
    pub half_average: f64,
    /// |full - half| / full.
    pub relative_change: f64,
    /// Whether the relative change is below the 2% threshold.
    pub converged: bool,
}

/// Relative-change threshold under window halving.
pub const CONVERGENCE_THRESHOLD: f64 = 0.02;

/// Effective environment dimension inferred from a time-averaged witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDimension {
    pub d_eff: f64,
    pub time_average: f64,
    pub diagnostics: ConvergenceDiagnostics,
}

/// Solve μ(x) = avg for x, where μ(x) = x(d_a²-1)/(d_a²x²-1)·‖Δ‖² is the
/// analytic Haar mean at environment dimension x. Rearranged this is the
/// quadratic avg·d_a²·x² - (d_a²-1)·‖Δ‖²·x - avg = 0; the positive root is
/// the unique solution with x > 1/d_a.
pub fn invert_effective_dimension(time_average: f64, hs_delta_sq: f64, da: usize) -> f64 {
    let a2 = (da * da) as f64;
    let b = (a2 - 1.0) * hs_delta_sq;
    (b + (b * b + 4.0 * time_average * time_average * a2).sqrt()) / (2.0 * time_average * a2)
}

/// Effective dimension from an already-computed trajectory.
pub fn effective_dimension_from_trajectory(
    traj: &WitnessTrajectory,
    hs_delta_sq: f64,
) -> Result<EffectiveDimension, Error> {
    let values = traj.values();
    let full_average = traj.time_average();
    if full_average < 1e-12 {
        return Err(Error::TimeAverageZero);
    }
    let half_count = values.len().div_ceil(2);
    let half_average = values[..half_count].iter().sum::<f64>() / half_count as f64;
    let relative_change = (full_average - half_average).abs() / full_average;
    let converged = relative_change < CONVERGENCE_THRESHOLD;
    let d_eff = invert_effective_dimension(full_average, hs_delta_sq, traj.dims().da());
    let result = EffectiveDimension {
        d_eff,
        time_average: full_average,
        diagnostics: ConvergenceDiagnostics {
            full_average,
            half_average,
            relative_change,
            converged,
        },
    };
    if !converged {
        return Err(Error::NotConverged {
            d_eff,
            time_average: full_average,
            relative_change,
        });
    }
    Ok(result)
}

/// Compute the trajectory under H and invert the Haar mean at its long-time
/// average. Fails with [`Error::TimeAverageZero`] when the dynamics carry no
/// signal and with [`Error::NotConverged`] (carrying the best estimate) when
/// the average still drifts by 2% or more under window halving.
pub fn effective_dimension(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    h: &HermitianOperator,
    grid: &TimeGrid,
) -> Result<EffectiveDimension, Error> {
    let traj = witness_trajectory(rho, rho_prime, h, grid)?;
    let hs_delta_sq = hs_norm_sq(&(rho.matrix() - rho_prime.matrix()));
    effective_dimension_from_trajectory(&traj, hs_delta_sq)
}
