//! Local dephasing in the eigenbasis of the reduced state of subsystem A,
//! and the geometric discord measure built on it.
//!
//! The dephasing channel pinches a bipartite state with the projectors
//! Π_i = |i⟩⟨i| ⊗ I_B, where {|i⟩} diagonalizes ρ_A. It leaves both marginals
//! untouched, erases all discord with respect to A, and never increases the
//! purity. The squared Hilbert-Schmidt distance between a state and its
//! dephased image is the discord measure used throughout this crate; it
//! equals the purity lost to the pinching.
//!
//! When ρ_A is degenerate its eigenbasis is not unique, and dephasing in an
//! arbitrarily chosen eigenbasis can alter even a zero-discord state. The
//! degenerate case is therefore surfaced as an error unless the caller opts
//! into the deterministic tie-broken basis explicitly.

use crate::error::Error;
use crate::linalg::{
    eigh_raw, hs_norm_sq, max_abs_entry, partial_trace_b_matrix, tensor_product, tol, trace_norm,
    BipartiteDims, CMatrix, DensityMatrix, UnitaryOperator, C64,
};

/// Orthonormal eigenbasis of ρ_A together with its spectrum and the two
/// special-case flags: a degenerate spectrum (basis not unique) and a pure
/// local state (the total state is then a product state and carries no
/// correlations at all).
#[derive(Debug, Clone)]
pub struct DephasingBasis {
    vectors: CMatrix,
    eigenvalues: Vec<f64>,
    degenerate: bool,
    min_gap: f64,
    local_state_pure: bool,
}

impl DephasingBasis {
    /// Columns of the d_a×d_a matrix are the basis vectors |i⟩.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// Populations p_i = ⟨i|ρ_A|i⟩, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_local_state_pure(&self) -> bool {
        self.local_state_pure
    }

    /// Smallest eigenvalue gap of ρ_A.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Diagonalize the reduced state of subsystem A and flag the special cases.
pub fn dephasing_basis(rho: &DensityMatrix) -> Result<DephasingBasis, Error> {
    let dims = rho.dims();
    if dims.da() < 2 {
        return Err(Error::InvalidDims(format!(
            "dephasing needs a nontrivial subsystem A, got dims {dims}"
        )));
    }
    let rho_a = partial_trace_b_matrix(rho.matrix(), dims);
    let (eigenvalues, vectors) = eigh_raw(&rho_a);
    let thr = crate::linalg::degeneracy_threshold(&eigenvalues);
    let min_gap = eigenvalues
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let degenerate = min_gap <= thr;
    let local_state_pure = *eigenvalues.last().expect("d_a >= 2") > 1.0 - tol::PURE;
    Ok(DephasingBasis {
        vectors,
        eigenvalues,
        degenerate,
        min_gap,
        local_state_pure,
    })
}

fn check_basis_dims(rho: &DensityMatrix, basis: &DephasingBasis) -> Result<(), Error> {
    if basis.dimension() != rho.dims().da() {
        return Err(Error::InvalidDims(format!(
            "basis dimension {} does not match d_a of dims {}",
            basis.dimension(),
            rho.dims()
        )));
    }
    Ok(())
}

fn pinch(rho: &DensityMatrix, basis: &DephasingBasis) -> DensityMatrix {
    let dims = rho.dims();
    let (da, db) = (dims.da(), dims.db());
    let w_full = tensor_product(basis.vectors(), &CMatrix::identity(db, db));
    let mut tilde = w_full.adjoint() * rho.matrix() * &w_full;
    for i in 0..da {
        for j in 0..da {
            if i != j {
                tilde
                    .view_mut((i * db, j * db), (db, db))
                    .fill(C64::new(0.0, 0.0));
            }
        }
    }
    let pinched = &w_full * tilde * w_full.adjoint();
    DensityMatrix::new(pinched, dims).expect("pinching preserves state invariants")
}

/// Dephase ρ in the given eigenbasis of its A marginal:
/// ρ' = Σ_i Π_i ρ Π_i with Π_i = |i⟩⟨i| ⊗ I_B.
///
/// Fails with [`Error::DegenerateLocalState`] when the basis is flagged
/// degenerate; use [`local_dephase_allow_degenerate`] to opt into the
/// deterministic tie-broken choice.
pub fn local_dephase(rho: &DensityMatrix, basis: &DephasingBasis) -> Result<DensityMatrix, Error> {
    check_basis_dims(rho, basis)?;
    if basis.is_degenerate() {
        return Err(Error::DegenerateLocalState {
            gap: basis.min_gap(),
        });
    }
    Ok(pinch(rho, basis))
}

/// Dephase in the given basis even when it is degenerate.
pub fn local_dephase_allow_degenerate(
    rho: &DensityMatrix,
    basis: &DephasingBasis,
) -> Result<DensityMatrix, Error> {
    check_basis_dims(rho, basis)?;
    Ok(pinch(rho, basis))
}

/// Geometric discord D(ρ) = ‖ρ - ρ'‖², the squared Hilbert-Schmidt distance
/// to the locally dephased reference state.
pub fn geometric_discord(rho: &DensityMatrix) -> Result<f64, Error> {
    let basis = dephasing_basis(rho)?;
    let rho_prime = local_dephase(rho, &basis)?;
    Ok(hs_norm_sq(&(rho.matrix() - rho_prime.matrix())))
}

/// D(ρ) evaluated with an explicitly chosen dephasing basis (no degeneracy
/// gate). The purity-difference identity holds for any complete orthogonal
/// pinching, so the value is well defined for every basis.
pub fn geometric_discord_in_basis(
    rho: &DensityMatrix,
    basis: &DephasingBasis,
) -> Result<f64, Error> {
    let rho_prime = local_dephase_allow_degenerate(rho, basis)?;
    Ok(hs_norm_sq(&(rho.matrix() - rho_prime.matrix())))
}

/// Both sides of the identity ‖ρ - ρ'‖² = P(ρ) - P(ρ'), for test harnesses.
/// The identity is basis-independent, so the degenerate case is allowed.
pub fn purity_difference_check(rho: &DensityMatrix) -> Result<(f64, f64), Error> {
    let basis = dephasing_basis(rho)?;
    let rho_prime = local_dephase_allow_degenerate(rho, &basis)?;
    let lhs = hs_norm_sq(&(rho.matrix() - rho_prime.matrix()));
    let rhs = rho.purity() - rho_prime.purity();
    Ok((lhs, rhs))
}

/// Generalized concurrence C = √(2 (1 - Tr{ρ_A²})) of a pure state. For pure
/// states the discord measure coincides with C²/2 = 1 - P(ρ_A): discord and
/// entanglement agree on pure states.
pub fn generalized_concurrence(rho: &DensityMatrix) -> Result<f64, Error> {
    let purity = rho.purity();
    if purity <= 1.0 - tol::PURE {
        return Err(Error::NotPure { purity });
    }
    let reduced_purity = rho.partial_trace_b().purity();
    Ok((2.0 * (1.0 - reduced_purity)).max(0.0).sqrt())
}

/// Lower bounds on the discord recoverable from the reduced dynamics after
/// evolving with a unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordBounds {
    /// ‖Tr_B{U Δ U†}‖₁², bounded above by ‖Δ‖₁² (trace-norm contraction).
    pub trace_norm_bound: f64,
    /// ‖Tr_B{U Δ U†}‖² / (d_a d_b), bounded above by D(ρ).
    pub hs_bound: f64,
}

/// Evaluate both reduced-dynamics witnesses for Δ = ρ - ρ'.
pub fn discord_lower_bounds(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    u: &UnitaryOperator,
) -> Result<DiscordBounds, Error> {
    let dims = rho.dims();
    if rho_prime.dims() != dims || u.dims() != dims {
        return Err(Error::InvalidDims(format!(
            "dims mismatch: state {}, reference {}, unitary {}",
            dims,
            rho_prime.dims(),
            u.dims()
        )));
    }
    let delta = rho.matrix() - rho_prime.matrix();
    let evolved = u.matrix() * delta * u.matrix().adjoint();
    let reduced = partial_trace_b_matrix(&evolved, dims);
    let tn = trace_norm(&reduced);
    Ok(DiscordBounds {
        trace_norm_bound: tn * tn,
        hs_bound: hs_norm_sq(&reduced) / (dims.da() as f64 * dims.db() as f64),
    })
}

/// Classical (zero-discord) state Σ_i p_i |i⟩⟨i| ⊗ ρ_B^i in the computational
/// A-basis. When the p_i are pairwise distinct this basis is the unique
/// eigenbasis of the A marginal, and the state is invariant under dephasing.
pub fn make_zero_discord_state(
    probs: &[f64],
    states: &[DensityMatrix],
) -> Result<DensityMatrix, Error> {
    if probs.is_empty() || probs.len() != states.len() {
        return Err(Error::InvalidProbabilities(format!(
            "need one state per probability, got {} probabilities and {} states",
            probs.len(),
            states.len()
        )));
    }
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidProbabilities(
            "entries must lie in [0, 1]".into(),
        ));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > tol::TRACE {
        return Err(Error::InvalidProbabilities(format!(
            "entries must sum to one, got {sum}"
        )));
    }
    let db = states[0].dims().total();
    if states.iter().any(|s| s.dims().total() != db) {
        return Err(Error::InvalidDims(
            "all B states must share one dimension".into(),
        ));
    }
    let da = probs.len();
    let dims = BipartiteDims::new(da, db)?;
    let mut m = CMatrix::zeros(da * db, da * db);
    for (i, (&p, state)) in probs.iter().zip(states).enumerate() {
        m.view_mut((i * db, i * db), (db, db))
            .copy_from(&state.matrix().scale(p));
    }
    DensityMatrix::new(m, dims)
}

/// Max-entry distance between the two states, for marginal and invariance
/// checks in tests.
pub fn state_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    max_abs_entry(&(a.matrix() - b.matrix()))
}
