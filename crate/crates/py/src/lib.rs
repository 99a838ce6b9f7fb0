//! Python bindings for the discord-witness library.
//!
//! Matrices cross the boundary as nested lists of Python complex numbers in
//! row-major order; states and Hamiltonians are wrapped in immutable classes.
//! Build with `cargo build -p discord-witness-py --release` and import the
//! produced cdylib as `discord_witness_py` (see python/smoke_test.py).

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use discord_witness::dephasing;
use discord_witness::ensembles;
use discord_witness::haar;
use discord_witness::linalg::{self, BipartiteDims, CMatrix};
use discord_witness::witness;

fn to_py_err(e: discord_witness::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dims_of(da: usize, db: usize) -> PyResult<BipartiteDims> {
    BipartiteDims::new(da, db).map_err(to_py_err)
}

fn matrix_from_rows(rows: &[Vec<Complex64>]) -> PyResult<CMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square and non-empty"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Bipartite density matrix with Hermiticity, trace and positivity enforced
/// at construction.
#[pyclass(frozen)]
struct DensityMatrix {
    inner: linalg::DensityMatrix,
}

#[pymethods]
impl DensityMatrix {
    #[new]
    fn new(matrix: Vec<Vec<Complex64>>, da: usize, db: usize) -> PyResult<Self> {
        let m = matrix_from_rows(&matrix)?;
        let inner = linalg::DensityMatrix::new(m, dims_of(da, db)?).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    /// √z |00⟩ + √(1-z) |11⟩ on a 2x2 system.
    #[staticmethod]
    fn pure_state_z(z: f64) -> PyResult<Self> {
        Ok(Self {
            inner: linalg::pure_state_z(z).map_err(to_py_err)?,
        })
    }

    /// Thermal state of a seeded random Hamiltonian.
    #[staticmethod]
    fn gibbs(da: usize, db: usize, beta: f64, seed: u64) -> PyResult<Self> {
        let dims = dims_of(da, db)?;
        let mut rng = ensembles::rng_from_seed(seed);
        let h = ensembles::sample_gue_hamiltonian(dims, &mut rng);
        let params = ensembles::GibbsParams::new(beta, dims).map_err(to_py_err)?;
        Ok(Self {
            inner: ensembles::gibbs_state(&h, &params).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn maximally_mixed(da: usize, db: usize) -> PyResult<Self> {
        Ok(Self {
            inner: linalg::maximally_mixed(dims_of(da, db)?),
        })
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.matrix())
    }

    fn dims(&self) -> (usize, usize) {
        (self.inner.dims().da(), self.inner.dims().db())
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn partial_trace_b(&self) -> Self {
        Self {
            inner: self.inner.partial_trace_b(),
        }
    }

    fn partial_trace_a(&self) -> Self {
        Self {
            inner: self.inner.partial_trace_a(),
        }
    }

    /// Locally dephased reference state. Degenerate local spectra raise
    /// unless `allow_degenerate` opts into the deterministic tie-broken basis.
    #[pyo3(signature = (allow_degenerate = false))]
    fn dephased(&self, allow_degenerate: bool) -> PyResult<Self> {
        let basis = dephasing::dephasing_basis(&self.inner).map_err(to_py_err)?;
        let inner = if allow_degenerate {
            dephasing::local_dephase_allow_degenerate(&self.inner, &basis)
        } else {
            dephasing::local_dephase(&self.inner, &basis)
        }
        .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[pyo3(signature = (allow_degenerate = false))]
    fn geometric_discord(&self, allow_degenerate: bool) -> PyResult<f64> {
        if allow_degenerate {
            let basis = dephasing::dephasing_basis(&self.inner).map_err(to_py_err)?;
            dephasing::geometric_discord_in_basis(&self.inner, &basis).map_err(to_py_err)
        } else {
            dephasing::geometric_discord(&self.inner).map_err(to_py_err)
        }
    }

    /// Both sides of the purity-difference identity (‖ρ-ρ'‖², P(ρ)-P(ρ')).
    fn purity_difference(&self) -> PyResult<(f64, f64)> {
        dephasing::purity_difference_check(&self.inner).map_err(to_py_err)
    }

    fn generalized_concurrence(&self) -> PyResult<f64> {
        dephasing::generalized_concurrence(&self.inner).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityMatrix(dims={}, purity={:.6})",
            self.inner.dims(),
            self.inner.purity()
        )
    }
}

/// Hermitian operator on a bipartite system.
#[pyclass(frozen)]
struct Hamiltonian {
    inner: linalg::HermitianOperator,
}

#[pymethods]
impl Hamiltonian {
    #[new]
    fn new(matrix: Vec<Vec<Complex64>>, da: usize, db: usize) -> PyResult<Self> {
        let m = matrix_from_rows(&matrix)?;
        Ok(Self {
            inner: linalg::HermitianOperator::new(m, dims_of(da, db)?).map_err(to_py_err)?,
        })
    }

    /// Seeded GUE draw: (G + G†)/2 with standard complex Gaussian G.
    #[staticmethod]
    fn gue(da: usize, db: usize, seed: u64) -> PyResult<Self> {
        let dims = dims_of(da, db)?;
        let mut rng = ensembles::rng_from_seed(seed);
        Ok(Self {
            inner: ensembles::sample_gue_hamiltonian(dims, &mut rng),
        })
    }

    /// Seeded uncoupled H_A ⊗ I + I ⊗ H_B; its dynamics carry no witness
    /// signal.
    #[staticmethod]
    fn uncoupled_gue(da: usize, db: usize, seed: u64) -> PyResult<Self> {
        let dims = dims_of(da, db)?;
        let mut rng = ensembles::rng_from_seed(seed);
        Ok(Self {
            inner: ensembles::sample_uncoupled_hamiltonian(dims, &mut rng),
        })
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.matrix())
    }

    fn dims(&self) -> (usize, usize) {
        (self.inner.dims().da(), self.inner.dims().db())
    }

    fn __repr__(&self) -> String {
        format!("Hamiltonian(dims={})", self.inner.dims())
    }
}

/// Analytic Haar statistics of the witness observable for a state pair:
/// (mu, s2, c1, c2).
#[pyfunction]
fn haar_stats(
    rho: PyRef<'_, DensityMatrix>,
    rho_prime: PyRef<'_, DensityMatrix>,
) -> PyResult<(f64, f64, f64, f64)> {
    let stats = haar::haar_stats(&rho.inner, &rho_prime.inner).map_err(to_py_err)?;
    Ok((stats.mu, stats.s2, stats.c1, stats.c2))
}

/// Large-environment limit of s/mu.
#[pyfunction]
fn relative_fluctuation(da: usize, db: usize) -> PyResult<f64> {
    haar::relative_fluctuation(dims_of(da, db)?).map_err(to_py_err)
}

/// Seeded Monte Carlo estimate over Haar-random unitaries:
/// (mean, variance, std_error).
#[pyfunction]
fn monte_carlo_stats(
    rho: PyRef<'_, DensityMatrix>,
    rho_prime: PyRef<'_, DensityMatrix>,
    n_samples: usize,
    seed: u64,
) -> PyResult<(f64, f64, f64)> {
    let stats = haar::monte_carlo_stats(&rho.inner, &rho_prime.inner, n_samples, seed)
        .map_err(to_py_err)?;
    Ok((stats.mean, stats.variance, stats.std_error))
}

/// One seeded Haar-random unitary on a (da x db)-dimensional system.
#[pyfunction]
fn haar_unitary(da: usize, db: usize, seed: u64) -> PyResult<Vec<Vec<Complex64>>> {
    let dims = dims_of(da, db)?;
    let mut rng = ensembles::rng_from_seed(seed);
    let u = ensembles::sample_haar_unitary(dims, &mut rng);
    Ok(matrix_to_rows(u.matrix()))
}

/// ‖Tr_B{U (ρ-ρ') U†}‖² for an explicit unitary matrix.
#[pyfunction]
fn witness_distance(
    rho: PyRef<'_, DensityMatrix>,
    rho_prime: PyRef<'_, DensityMatrix>,
    unitary: Vec<Vec<Complex64>>,
) -> PyResult<f64> {
    let m = matrix_from_rows(&unitary)?;
    let u = linalg::UnitaryOperator::new(m, rho.inner.dims()).map_err(to_py_err)?;
    witness::witness_distance(&rho.inner, &rho_prime.inner, &u).map_err(to_py_err)
}

/// dist(t) over a uniform grid under U_t = exp(-iHt):
/// (times, values, time_average).
#[pyfunction]
fn witness_trajectory(
    rho: PyRef<'_, DensityMatrix>,
    rho_prime: PyRef<'_, DensityMatrix>,
    h: PyRef<'_, Hamiltonian>,
    t_start: f64,
    t_end: f64,
    n_points: usize,
) -> PyResult<(Vec<f64>, Vec<f64>, f64)> {
    let grid = witness::TimeGrid::new(t_start, t_end, n_points).map_err(to_py_err)?;
    let traj = witness::witness_trajectory(&rho.inner, &rho_prime.inner, &h.inner, &grid)
        .map_err(to_py_err)?;
    Ok((
        traj.times().to_vec(),
        traj.values().to_vec(),
        traj.time_average(),
    ))
}

/// Effective environment dimension from the long-time witness average:
/// (d_eff, time_average, converged). Raises when the dynamics carry no
/// signal at all.
#[pyfunction]
fn effective_dimension(
    rho: PyRef<'_, DensityMatrix>,
    rho_prime: PyRef<'_, DensityMatrix>,
    h: PyRef<'_, Hamiltonian>,
    t_start: f64,
    t_end: f64,
    n_points: usize,
) -> PyResult<(f64, f64, bool)> {
    let grid = witness::TimeGrid::new(t_start, t_end, n_points).map_err(to_py_err)?;
    match witness::effective_dimension(&rho.inner, &rho_prime.inner, &h.inner, &grid) {
        Ok(eff) => Ok((eff.d_eff, eff.time_average, true)),
        Err(discord_witness::Error::NotConverged {
            d_eff,
            time_average,
            ..
        }) => Ok((d_eff, time_average, false)),
        Err(e) => Err(to_py_err(e)),
    }
}

#[pymodule]
fn discord_witness_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DensityMatrix>()?;
    m.add_class::<Hamiltonian>()?;
    m.add_function(wrap_pyfunction!(haar_stats, m)?)?;
    m.add_function(wrap_pyfunction!(relative_fluctuation, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_stats, m)?)?;
    m.add_function(wrap_pyfunction!(haar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(witness_distance, m)?)?;
    m.add_function(wrap_pyfunction!(witness_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(effective_dimension, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
