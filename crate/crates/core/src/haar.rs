//! Closed-form statistics of the witness observable ‖Tr_B{U Δ U†}‖² over
//! Haar-random unitaries U, together with a seeded Monte Carlo estimator
//! used for cross-validation.
//!
//! The mean is proportional to ‖Δ‖² with a coefficient depending only on the
//! subsystem dimensions; the variance combines (Tr Δ²)² and Tr Δ⁴ with two
//! dimension-dependent coefficients c₁ and c₂. All coefficients are evaluated
//! from their factored forms; the factors stay far inside double range for
//! the dimensions this crate targets.

use crate::error::Error;
use crate::linalg::{
    hermitian_deviation, hs_norm_sq, partial_trace_b_matrix, tol, BipartiteDims, CMatrix,
    DensityMatrix,
};

/// Coefficient of ‖Δ‖² in the Haar mean: (d_a²·d_b - d_b)/(d_a²·d_b² - 1).
pub fn mu_coefficient(dims: BipartiteDims) -> f64 {
    if dims.total() == 1 {
        // One-dimensional total space: the reduced observable is identically
        // zero because Δ is traceless.
        return 0.0;
    }
    let da = dims.da() as f64;
    let db = dims.db() as f64;
    (da * da * db - db) / (da * da * db * db - 1.0)
}

/// Variance coefficient c₁ multiplying (Tr Δ²)².
pub fn c1_coefficient(dims: BipartiteDims) -> f64 {
    if dims.da() == 1 || dims.db() == 1 {
        // The observable is deterministic in these limits (identically zero
        // for trivial A, unitarily invariant for trivial B); the variance
        // vanishes and the closed form becomes 0/0.
        return 0.0;
    }
    let da2 = (dims.da() * dims.da()) as f64;
    let db2 = (dims.db() * dims.db()) as f64;
    let x = da2 * db2;
    2.0 * (15.0 - 4.0 * x + x * x) * (da2 - 1.0) * (db2 - 1.0)
        / ((36.0 - 13.0 * x + x * x) * (x - 1.0) * (x - 1.0))
}

/// Variance coefficient c₂ multiplying Tr Δ⁴.
pub fn c2_coefficient(dims: BipartiteDims) -> f64 {
    if dims.da() == 1 || dims.db() == 1 {
        return 0.0;
    }
    let da = dims.da() as f64;
    let db = dims.db() as f64;
    let x = da * da * db * db;
    -10.0 * da * db * (db * db - 1.0) * (da * da - 1.0) / (x * (x - 7.0) * (x - 7.0) - 36.0)
}

fn delta_of(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<CMatrix, Error> {
    if rho.dims() != rho_prime.dims() {
        return Err(Error::InvalidDims(format!(
            "state dims {} do not match reference dims {}",
            rho.dims(),
            rho_prime.dims()
        )));
    }
    Ok(rho.matrix() - rho_prime.matrix())
}

fn check_delta(delta: &CMatrix, dims: BipartiteDims) -> Result<(), Error> {
    if delta.nrows() != dims.total() || delta.ncols() != dims.total() {
        return Err(Error::InvalidDims(format!(
            "difference matrix is {}x{}, dims {} require {d}x{d}",
            delta.nrows(),
            delta.ncols(),
            dims,
            d = dims.total()
        )));
    }
    let dev = hermitian_deviation(delta);
    if dev > tol::HERM {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Haar mean of the witness observable for an explicit difference matrix.
pub fn haar_mean_delta(delta: &CMatrix, dims: BipartiteDims) -> Result<f64, Error> {
    check_delta(delta, dims)?;
    Ok(mu_coefficient(dims) * hs_norm_sq(delta))
}

/// Haar variance of the witness observable for an explicit difference matrix.
pub fn haar_variance_delta(delta: &CMatrix, dims: BipartiteDims) -> Result<f64, Error> {
    check_delta(delta, dims)?;
    let tr2 = hs_norm_sq(delta);
    let tr4 = hs_norm_sq(&(delta * delta));
    Ok(c1_coefficient(dims) * tr2 * tr2 + c2_coefficient(dims) * tr4)
}

/// Mean of ‖Tr_B{U(ρ-ρ')U†}‖² over Haar-random U.
pub fn haar_mean(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<f64, Error> {
    let delta = delta_of(rho, rho_prime)?;
    haar_mean_delta(&delta, rho.dims())
}

/// Variance of ‖Tr_B{U(ρ-ρ')U†}‖² over Haar-random U.
pub fn haar_variance(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<f64, Error> {
    let delta = delta_of(rho, rho_prime)?;
    haar_variance_delta(&delta, rho.dims())
}

/// Analytic mean and variance for a state pair, with the coefficients
/// exposed for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarStats {
    pub mu: f64,
    pub s2: f64,
    pub c1: f64,
    pub c2: f64,
    pub dims: BipartiteDims,
}

pub fn haar_stats(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<HaarStats, Error> {
    let dims = rho.dims();
    let delta = delta_of(rho, rho_prime)?;
    Ok(HaarStats {
        mu: haar_mean_delta(&delta, dims)?,
        s2: haar_variance_delta(&delta, dims)?,
        c1: c1_coefficient(dims),
        c2: c2_coefficient(dims),
        dims,
    })
}

/// Large-d_b limit of the relative fluctuation s/μ: √(2/(d_a² - 1)).
///
/// A convenience for orientation only; for finite d_b use the exact ratio
/// √(s²)/μ from [`haar_stats`].
pub fn relative_fluctuation(dims: BipartiteDims) -> Result<f64, Error> {
    if dims.da() < 2 {
        return Err(Error::InvalidDims(format!(
            "relative fluctuation needs d_a >= 2, got dims {dims}"
        )));
    }
    let da = dims.da() as f64;
    Ok((2.0 / (da * da - 1.0)).sqrt())
}

/// Specialized d_a = 2 forms of the mean and variance, written exactly as
/// their two-level reductions. They agree with the general formulas to
/// rounding error and serve as an independent algebraic route in tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsSpecialization {
    pub mu: f64,
    pub s2: f64,
}

pub fn gibbs_specialization(db: usize, delta: &CMatrix) -> Result<GibbsSpecialization, Error> {
    let dims = BipartiteDims::new(2, db)?;
    check_delta(delta, dims)?;
    let dbf = db as f64;
    let db2 = dbf * dbf;
    let tr2 = hs_norm_sq(delta);
    let tr4 = hs_norm_sq(&(delta * delta));
    let mu = 3.0 * dbf / (4.0 * db2 - 1.0) * tr2;
    let s2 = 3.0 * (15.0 - 16.0 * db2 + 16.0 * db2 * db2)
        / (2.0 * (1.0 - 4.0 * db2) * (1.0 - 4.0 * db2) * (4.0 * db2 - 9.0))
        * tr2
        * tr2
        - 15.0 * dbf / (9.0 - 40.0 * db2 + 16.0 * db2 * db2) * tr4;
    Ok(GibbsSpecialization { mu, s2 })
}

/// Empirical mean, unbiased variance and standard error of the witness
/// observable over seeded Haar samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloStats {
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

// Samples per derived stream. Fixing the chunk size (rather than deriving it
// from the worker count) keeps results bit-identical however many threads run.
const MC_CHUNK: usize = 256;

/// Monte Carlo estimate of the Haar statistics of ‖Tr_B{U(ρ-ρ')U†}‖².
///
/// Sample i of chunk k is drawn from the stream derived from (seed, k), and
/// the reduction runs in sample order, so the result depends only on the
/// seed and the sample count.
pub fn monte_carlo_stats(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloStats, Error> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let dims = rho.dims();
    let delta = delta_of(rho, rho_prime)?;
    let d = dims.total();

    let mut values = vec![0.0f64; n_samples];
    {
        let chunks: Vec<(usize, &mut [f64])> = values.chunks_mut(MC_CHUNK).enumerate().collect();
        let workers = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
            .min(chunks.len())
            .max(1);
        // Round-robin chunk assignment; slices are disjoint by construction.
        let mut per_worker: Vec<Vec<(usize, &mut [f64])>> =
            (0..workers).map(|_| Vec::new()).collect();
        for (k, slice) in chunks {
            per_worker[k % workers].push((k, slice));
        }
        let delta_ref = &delta;
        std::thread::scope(|scope| {
            for group in per_worker {
                scope.spawn(move || {
                    for (k, slice) in group {
                        let mut rng = crate::ensembles::derived_stream(seed, k as u64);
                        for v in slice.iter_mut() {
                            let u = crate::ensembles::haar_unitary_matrix(d, &mut rng);
                            let evolved = &u * delta_ref * u.adjoint();
                            *v = hs_norm_sq(&partial_trace_b_matrix(&evolved, dims));
                        }
                    }
                });
            }
        });
    }

    let n = n_samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Ok(MonteCarloStats {
        mean,
        variance,
        std_error: (variance / n).sqrt(),
    })
}
