//! Dense complex linear algebra and bipartite-system primitives.
//!
//! Operators are stored as `nalgebra` dynamic matrices over `Complex<f64>`.
//! The composite index convention is A-major throughout: the basis pair
//! (i, k), with `i` indexing subsystem A and `k` indexing subsystem B, maps
//! to the flat index `i * d_b + k`. Every operation in this crate assumes
//! this ordering; do not mix conventions.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{Complex, DMatrix, DVector};

use crate::error::Error;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Numerical tolerances used by the validating constructors.
pub mod tol {
    /// Max-entry Hermiticity deviation accepted (and silently repaired).
    pub const HERM: f64 = 1e-10;
    /// Accepted deviation of the trace from one.
    pub const TRACE: f64 = 1e-10;
    /// Most negative eigenvalue still accepted as positive semidefinite.
    pub const PSD: f64 = 1e-9;
    /// Max-entry deviation of U†U from the identity.
    pub const UNITARY: f64 = 1e-9;
    /// Max-entry reconstruction error of a spectral decomposition.
    pub const RECON: f64 = 1e-9;
    /// Relative gap scale below which neighbouring eigenvalues form a cluster.
    pub const DEGENERACY_SCALE: f64 = 1e-10;
    /// Margin below which a largest eigenvalue of one flags a pure state.
    pub const PURE: f64 = 1e-10;
}

/// Dimensions of the two local Hilbert spaces of a bipartite system.
///
/// Marginals are tagged with the trivial factor they retain: a reduced state
/// of subsystem A carries dims (d_a, 1), one of subsystem B carries (1, d_b).
/// Operations that need a nontrivial A side (the dephasing basis, discord)
/// check `d_a >= 2` themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    da: usize,
    db: usize,
}

impl BipartiteDims {
    pub fn new(da: usize, db: usize) -> Result<Self, Error> {
        if da == 0 || db == 0 {
            return Err(Error::InvalidDims(format!(
                "subsystem dimensions must be positive, got {da}x{db}"
            )));
        }
        Ok(Self { da, db })
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    /// Total dimension d = d_a * d_b.
    pub fn total(&self) -> usize {
        self.da * self.db
    }
}

impl std::fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.da, self.db)
    }
}

/// Kronecker product with A-major ordering:
/// (a ⊗ b)[(i,k),(j,l)] = a[i,j] * b[k,l] at flat row i*rows(b)+k.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Squared Hilbert-Schmidt norm ‖M‖² = Tr{M†M} = Σ |m_ij|².
pub fn hs_norm_sq(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest entry modulus.
pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-entry deviation of M from M†.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// (M + M†)/2.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Trace norm ‖M‖₁ = Tr√(M†M), the sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = hermitize(&(m.adjoint() * m));
    let (vals, _) = eigh_raw(&gram);
    vals.iter().map(|&l| l.max(0.0).sqrt()).sum()
}

/// Partial trace over subsystem B of an arbitrary d×d matrix:
/// out[i,j] = Σ_k m[i*d_b+k, j*d_b+k].
pub fn partial_trace_b_matrix(m: &CMatrix, dims: BipartiteDims) -> CMatrix {
    assert_eq!(m.nrows(), dims.total(), "matrix size does not match dims");
    let (da, db) = (dims.da, dims.db);
    let mut out = CMatrix::zeros(da, da);
    for i in 0..da {
        for j in 0..da {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..db {
                acc += m[(i * db + k, j * db + k)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Partial trace over subsystem A: out[k,l] = Σ_i m[i*d_b+k, i*d_b+l].
pub fn partial_trace_a_matrix(m: &CMatrix, dims: BipartiteDims) -> CMatrix {
    assert_eq!(m.nrows(), dims.total(), "matrix size does not match dims");
    let (da, db) = (dims.da, dims.db);
    let mut out = CMatrix::zeros(db, db);
    for k in 0..db {
        for l in 0..db {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..da {
                acc += m[(i * db + k, i * db + l)];
            }
            out[(k, l)] = acc;
        }
    }
    out
}

/// Gap scale separating genuine spectral clusters from eigensolver noise.
///
/// Relative to the spectrum: 1e-10 times the larger of the spectral range and
/// the largest eigenvalue modulus. The second term keeps exact and near-exact
/// degeneracies (range ≈ 0) inside one cluster.
pub(crate) fn degeneracy_threshold(eigenvalues: &[f64]) -> f64 {
    if eigenvalues.is_empty() {
        return 0.0;
    }
    let lo = eigenvalues[0];
    let hi = eigenvalues[eigenvalues.len() - 1];
    let scale = (hi - lo).max(lo.abs()).max(hi.abs());
    tol::DEGENERACY_SCALE * scale
}

/// Hermitian eigendecomposition with deterministic ordering.
///
/// Eigenvalues ascend. Within clusters of eigenvalues closer than the
/// degeneracy threshold, columns are ordered by the index of their
/// largest-modulus component, and every column is rotated so that component
/// is real and positive. Identical input bits give identical output bits.
pub(crate) fn eigh_raw(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let se = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        se.eigenvalues[i]
            .partial_cmp(&se.eigenvalues[j])
            .expect("eigenvalues of a finite Hermitian matrix are finite")
    });
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut cols: Vec<CVector> = order
        .iter()
        .map(|&i| se.eigenvectors.column(i).into_owned())
        .collect();

    // Tie-break inside degenerate clusters by the index of the dominant
    // component so the returned basis does not depend on solver internals.
    let thr = degeneracy_threshold(&vals);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end] - vals[end - 1] <= thr {
            end += 1;
        }
        if end - start > 1 {
            let mut cluster: Vec<(usize, CVector)> = cols
                .splice(start..end, std::iter::empty())
                .map(|v| (dominant_index(&v), v))
                .collect();
            cluster.sort_by_key(|(idx, _)| *idx);
            for (offset, (_, v)) in cluster.into_iter().enumerate() {
                cols.insert(start + offset, v);
            }
        }
        start = end;
    }

    let mut vecs = CMatrix::zeros(n, n);
    for (c, v) in cols.iter().enumerate() {
        let k = dominant_index(v);
        let pivot = v[k];
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / C64::new(pivot.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for r in 0..n {
            vecs[(r, c)] = v[r] * phase;
        }
    }
    (vals, vecs)
}

fn dominant_index(v: &CVector) -> usize {
    let mut best = 0;
    let mut best_norm = v[0].norm_sqr();
    for (i, z) in v.iter().enumerate().skip(1) {
        let nrm = z.norm_sqr();
        if nrm > best_norm {
            best = i;
            best_norm = nrm;
        }
    }
    best
}

/// Eigendecomposition of a Hermitian operator: eigenvalues ascending,
/// eigenvector columns orthonormal, V diag(λ) V† reproducing the input.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// V f(Λ) V† for a scalar function f applied to the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.eigenvalues.len();
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            self.eigenvalues.iter().map(|&l| f(l)),
        ));
        &self.eigenvectors * diag * self.eigenvectors.adjoint()
    }

    /// V Λ V†.
    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|l| C64::new(l, 0.0))
    }
}

/// Deterministic Hermitian eigendecomposition of an operator.
pub fn eig_hermitian(h: &HermitianOperator) -> SpectralDecomposition {
    let (eigenvalues, eigenvectors) = eigh_raw(h.matrix());
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Spectral propagator U = exp(-i H t), computed as V diag(e^{-iλt}) V†.
pub fn propagator(h: &HermitianOperator, t: f64) -> Result<UnitaryOperator, Error> {
    if !t.is_finite() {
        return Err(Error::NonFinite("t"));
    }
    let dec = eig_hermitian(h);
    let u = dec.apply(|l| C64::new(0.0, -l * t).exp());
    UnitaryOperator::new(u, h.dims())
}

fn check_square(m: &CMatrix, dims: BipartiteDims, what: &str) -> Result<(), Error> {
    if m.nrows() != m.ncols() || m.nrows() != dims.total() {
        return Err(Error::InvalidDims(format!(
            "{what}: expected {d}x{d} for dims {dims}, got {r}x{c}",
            d = dims.total(),
            r = m.nrows(),
            c = m.ncols(),
        )));
    }
    Ok(())
}

/// Density matrix of a bipartite system: Hermitian, unit trace, positive
/// semidefinite. Validated eagerly on construction; Hermiticity deviations
/// below tolerance are repaired via (M + M†)/2 so that long pipelines do not
/// accumulate drift.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: BipartiteDims,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, dims: BipartiteDims) -> Result<Self, Error> {
        check_square(&matrix, dims, "density matrix")?;
        let dev = hermitian_deviation(&matrix);
        if dev > tol::HERM {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let matrix = hermitize(&matrix);
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let (vals, _) = eigh_raw(&matrix);
        if vals[0] < -tol::PSD {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: vals[0],
            });
        }
        Ok(Self { matrix, dims })
    }

    /// |ψ⟩⟨ψ| for a (normalized) state vector.
    pub fn from_pure(psi: &CVector, dims: BipartiteDims) -> Result<Self, Error> {
        if psi.len() != dims.total() {
            return Err(Error::InvalidDims(format!(
                "state vector of length {} does not match dims {dims}",
                psi.len()
            )));
        }
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let rho = (psi * psi.adjoint()).unscale(norm_sq);
        Self::new(rho, dims)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// Purity P(ρ) = Tr{ρ²}; for Hermitian ρ this is the squared HS norm.
    pub fn purity(&self) -> f64 {
        hs_norm_sq(&self.matrix)
    }

    /// Reduced state of subsystem A, tagged with dims (d_a, 1).
    pub fn partial_trace_b(&self) -> DensityMatrix {
        let reduced = partial_trace_b_matrix(&self.matrix, self.dims);
        let dims = BipartiteDims::new(self.dims.da, 1).expect("d_a >= 1");
        DensityMatrix::new(reduced, dims).expect("partial trace preserves state invariants")
    }

    /// Reduced state of subsystem B, tagged with dims (1, d_b).
    pub fn partial_trace_a(&self) -> DensityMatrix {
        let reduced = partial_trace_a_matrix(&self.matrix, self.dims);
        let dims = BipartiteDims::new(1, self.dims.db).expect("d_b >= 1");
        DensityMatrix::new(reduced, dims).expect("partial trace preserves state invariants")
    }

    /// U ρ U†.
    pub fn evolve(&self, u: &UnitaryOperator) -> Result<DensityMatrix, Error> {
        if u.dims() != self.dims {
            return Err(Error::InvalidDims(format!(
                "state dims {} do not match unitary dims {}",
                self.dims,
                u.dims()
            )));
        }
        let evolved = u.matrix() * &self.matrix * u.matrix().adjoint();
        DensityMatrix::new(evolved, self.dims)
    }
}

/// Hermitian operator (Hamiltonian) on a bipartite system.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
    dims: BipartiteDims,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix, dims: BipartiteDims) -> Result<Self, Error> {
        check_square(&matrix, dims, "Hermitian operator")?;
        let dev = hermitian_deviation(&matrix);
        if dev > tol::HERM {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self {
            matrix: hermitize(&matrix),
            dims,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }
}

/// Unitary operator (propagator) on a bipartite system.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: CMatrix,
    dims: BipartiteDims,
}

impl UnitaryOperator {
    pub fn new(matrix: CMatrix, dims: BipartiteDims) -> Result<Self, Error> {
        check_square(&matrix, dims, "unitary operator")?;
        let gram = matrix.adjoint() * &matrix;
        let dev = max_abs_entry(&(gram - CMatrix::identity(matrix.nrows(), matrix.nrows())));
        if dev > tol::UNITARY {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self { matrix, dims })
    }

    pub fn identity(dims: BipartiteDims) -> Self {
        Self {
            matrix: CMatrix::identity(dims.total(), dims.total()),
            dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }
}

/// The maximally mixed state I/d.
pub fn maximally_mixed(dims: BipartiteDims) -> DensityMatrix {
    let d = dims.total();
    let m = CMatrix::identity(d, d).unscale(d as f64);
    DensityMatrix::new(m, dims).expect("I/d is a valid state")
}

/// Pure two-qubit state √z |00⟩ + √(1-z) |11⟩, dims 2x2.
pub fn pure_state_z(z: f64) -> Result<DensityMatrix, Error> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidArgument(format!(
            "z must lie in [0, 1], got {z}"
        )));
    }
    let dims = BipartiteDims::new(2, 2)?;
    let mut psi = CVector::zeros(4);
    psi[0] = C64::new(z.sqrt(), 0.0);
    psi[3] = C64::new((1.0 - z).sqrt(), 0.0);
    DensityMatrix::from_pure(&psi, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{rng_from_seed, sample_gue_hamiltonian, sample_hs_state};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn dims(da: usize, db: usize) -> BipartiteDims {
        BipartiteDims::new(da, db).unwrap()
    }

    // Brute-force Kronecker product by explicit index loops.
    fn tensor_oracle(a: &CMatrix, b: &CMatrix) -> CMatrix {
        let (na, nb) = (a.nrows(), b.nrows());
        let mut out = CMatrix::zeros(na * nb, na * nb);
        for i in 0..na {
            for j in 0..na {
                for k in 0..nb {
                    for l in 0..nb {
                        out[(i * nb + k, j * nb + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn tensor_identity_case() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(tensor_product(&i2, &i2), CMatrix::identity(4, 4));
    }

    #[test]
    fn tensor_projector_ordering() {
        let p0 = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
        let p1 = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]));
        let expected = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ]));
        assert_eq!(tensor_product(&p0, &p1), expected);
    }

    #[test]
    fn tensor_matches_index_loop_oracle() {
        let mut rng = rng_from_seed(11);
        let a = crate::ensembles::ginibre_matrix(2, &mut rng);
        let b = crate::ensembles::ginibre_matrix(2, &mut rng);
        let diff = tensor_product(&a, &b) - tensor_oracle(&a, &b);
        assert!(max_abs_entry(&diff) == 0.0);
    }

    // Partial trace over B by explicit summation.
    fn ptrace_b_oracle(m: &CMatrix, d: BipartiteDims) -> CMatrix {
        let mut out = CMatrix::zeros(d.da(), d.da());
        for i in 0..d.da() {
            for j in 0..d.da() {
                for k in 0..d.db() {
                    out[(i, j)] += m[(i * d.db() + k, j * d.db() + k)];
                }
            }
        }
        out
    }

    fn ptrace_a_oracle(m: &CMatrix, d: BipartiteDims) -> CMatrix {
        let mut out = CMatrix::zeros(d.db(), d.db());
        for k in 0..d.db() {
            for l in 0..d.db() {
                for i in 0..d.da() {
                    out[(k, l)] += m[(i * d.db() + k, i * d.db() + l)];
                }
            }
        }
        out
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factors() {
        let mut rng = rng_from_seed(3);
        let rho_a = sample_hs_state(dims(2, 1), &mut rng);
        let rho_b = sample_hs_state(dims(1, 3), &mut rng);
        let joint =
            DensityMatrix::new(tensor_product(rho_a.matrix(), rho_b.matrix()), dims(2, 3)).unwrap();
        let back_a = joint.partial_trace_b();
        let back_b = joint.partial_trace_a();
        assert!(max_abs_entry(&(back_a.matrix() - rho_a.matrix())) < 1e-12);
        assert!(max_abs_entry(&(back_b.matrix() - rho_b.matrix())) < 1e-12);
    }

    #[test]
    fn partial_trace_of_psi_z_is_diagonal() {
        let rho = pure_state_z(0.25).unwrap();
        let red_a = rho.partial_trace_b();
        let red_b = rho.partial_trace_a();
        let expected = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.25, 0.0), c(0.75, 0.0)]));
        assert!(max_abs_entry(&(red_a.matrix() - &expected)) < 1e-15);
        // Schmidt symmetry: the B marginal has the same spectrum.
        assert!(max_abs_entry(&(red_b.matrix() - &expected)) < 1e-15);
    }

    #[test]
    fn partial_traces_match_summation_oracle() {
        let mut rng = rng_from_seed(17);
        for d in [dims(2, 2), dims(2, 3)] {
            let rho = sample_hs_state(d, &mut rng);
            let diff_b = partial_trace_b_matrix(rho.matrix(), d) - ptrace_b_oracle(rho.matrix(), d);
            let diff_a = partial_trace_a_matrix(rho.matrix(), d) - ptrace_a_oracle(rho.matrix(), d);
            assert!(max_abs_entry(&diff_b) == 0.0);
            assert!(max_abs_entry(&diff_a) == 0.0);
        }
    }

    #[test]
    fn purity_endpoints() {
        let pure = pure_state_z(0.3).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-12);
        let mixed = maximally_mixed(dims(2, 2));
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
        // Dephased |Ψ_{1/2}⟩: z² + (1-z)² at z = 1/2.
        let dephased = DensityMatrix::new(
            CMatrix::from_diagonal(&CVector::from_vec(vec![
                c(0.5, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.5, 0.0),
            ])),
            dims(2, 2),
        )
        .unwrap();
        assert!((dephased.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hs_norm_basics() {
        assert_eq!(hs_norm_sq(&CMatrix::zeros(3, 3)), 0.0);
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.5, 0.0), c(-0.5, 0.0)]));
        assert!((hs_norm_sq(&m) - 0.5).abs() < 1e-15);
        // Tr{M†M} by explicit product.
        let mut rng = rng_from_seed(5);
        let g = crate::ensembles::ginibre_matrix(4, &mut rng);
        let tr = (g.adjoint() * &g).trace();
        assert!((hs_norm_sq(&g) - tr.re).abs() < 1e-12 * tr.re.max(1.0));
    }

    #[test]
    fn trace_norm_basics() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.5, 0.0), c(-0.5, 0.0)]));
        assert!((trace_norm(&m) - 1.0).abs() < 1e-12);
        assert_eq!(trace_norm(&CMatrix::zeros(4, 4)), 0.0);
        // Hermitian case: sum of |eigenvalues|.
        let mut rng = rng_from_seed(6);
        let h = sample_gue_hamiltonian(dims(2, 2), &mut rng);
        let (vals, _) = eigh_raw(h.matrix());
        let expected: f64 = vals.iter().map(|l| l.abs()).sum();
        assert!((trace_norm(h.matrix()) - expected).abs() < 1e-10);
    }

    #[test]
    fn eigh_diagonal_input_sorted() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(3.0, 0.0),
            c(1.0, 0.0),
            c(2.0, 0.0),
        ]));
        let h = HermitianOperator::new(m, dims(3, 1)).unwrap();
        let dec = eig_hermitian(&h);
        assert_eq!(dec.eigenvalues(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigh_pauli_x_spectrum() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(1.0, 0.0);
        let h = HermitianOperator::new(m, dims(2, 1)).unwrap();
        let dec = eig_hermitian(&h);
        assert!((dec.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_reconstruction_and_orthonormality() {
        let mut rng = rng_from_seed(7);
        for d in [dims(2, 2), dims(2, 8)] {
            let h = sample_gue_hamiltonian(d, &mut rng);
            let dec = eig_hermitian(&h);
            let recon_err = max_abs_entry(&(dec.reconstruct() - h.matrix()));
            assert!(recon_err < tol::RECON, "reconstruction error {recon_err}");
            let n = d.total();
            let gram = dec.eigenvectors().adjoint() * dec.eigenvectors();
            let ortho_err = max_abs_entry(&(gram - CMatrix::identity(n, n)));
            assert!(ortho_err < tol::UNITARY);
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            HermitianOperator::new(m, dims(2, 1)),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigh_is_deterministic() {
        let mut rng = rng_from_seed(8);
        let h = sample_gue_hamiltonian(dims(2, 4), &mut rng);
        let a = eig_hermitian(&h);
        let b = eig_hermitian(&h);
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors(), b.eigenvectors());
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let mut rng = rng_from_seed(9);
        let h = sample_gue_hamiltonian(dims(2, 2), &mut rng);
        let u = propagator(&h, 0.0).unwrap();
        assert!(max_abs_entry(&(u.matrix() - CMatrix::identity(4, 4))) < 1e-13);
    }

    #[test]
    fn propagator_of_diagonal_hamiltonian() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        let h = HermitianOperator::new(m, dims(2, 1)).unwrap();
        let t = 0.7;
        let u = propagator(&h, t).unwrap();
        let expected = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.0, -1.5 * t).exp(),
            c(0.0, 0.5 * t).exp(),
        ]));
        assert!(max_abs_entry(&(u.matrix() - &expected)) < 1e-14);
    }

    #[test]
    fn propagator_group_property() {
        let mut rng = rng_from_seed(10);
        let h = sample_gue_hamiltonian(dims(2, 3), &mut rng);
        let (t1, t2) = (0.83, 1.91);
        let u12 = propagator(&h, t1 + t2).unwrap();
        let prod = propagator(&h, t1).unwrap().matrix() * propagator(&h, t2).unwrap().matrix();
        assert!(max_abs_entry(&(u12.matrix() - prod)) < 1e-10);
    }

    #[test]
    fn evolve_preserves_invariants_and_purity() {
        let mut rng = rng_from_seed(12);
        let d = dims(2, 2);
        let rho = sample_hs_state(d, &mut rng);
        let id = UnitaryOperator::identity(d);
        assert!(max_abs_entry(&(rho.evolve(&id).unwrap().matrix() - rho.matrix())) < 1e-15);
        let u = crate::ensembles::sample_haar_unitary(d, &mut rng);
        let evolved = rho.evolve(&u).unwrap();
        assert!((evolved.purity() - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        let d = dims(2, 1);
        // Non-Hermitian.
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(0.3, 0.0);
        m[(0, 0)] = c(0.5, 0.0);
        m[(1, 1)] = c(0.5, 0.0);
        assert!(matches!(
            DensityMatrix::new(m, d),
            Err(Error::NotHermitian { .. })
        ));
        // Wrong trace.
        let m = CMatrix::identity(2, 2);
        assert!(matches!(
            DensityMatrix::new(m, d),
            Err(Error::TraceNotOne { .. })
        ));
        // Not PSD.
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(
            DensityMatrix::new(m, d),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn partial_traces_preserve_trace() {
        let mut rng = rng_from_seed(13);
        for d in [dims(2, 2), dims(2, 4), dims(3, 3)] {
            let rho = sample_hs_state(d, &mut rng);
            let tr_a = rho.partial_trace_b().matrix().trace();
            let tr_b = rho.partial_trace_a().matrix().trace();
            assert!((tr_a.re - 1.0).abs() < 1e-12 && tr_a.im.abs() < 1e-12);
            assert!((tr_b.re - 1.0).abs() < 1e-12 && tr_b.im.abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Norm sandwich: ‖M‖₁ ≥ ‖M‖ and ‖M‖² ≥ ‖M‖₁²/d for d×d inputs.
        #[test]
        fn norm_ordering(entries in proptest::collection::vec(-1.0f64..1.0, 32)) {
            let m = CMatrix::from_fn(4, 4, |i, j| {
                c(entries[2 * (4 * i + j)], entries[2 * (4 * i + j) + 1])
            });
            let tn = trace_norm(&m);
            let hs2 = hs_norm_sq(&m);
            prop_assert!(tn + 1e-10 >= hs2.sqrt());
            prop_assert!(hs2 + 1e-10 >= tn * tn / 4.0);
        }

        // Tensor then trace out B recovers the A factor.
        #[test]
        fn tensor_ptrace_roundtrip(seed in 0u64..1u64 << 32) {
            let mut rng = rng_from_seed(seed);
            let d = dims(2, 3);
            let a = sample_hs_state(dims(2, 1), &mut rng);
            let b = sample_hs_state(dims(1, 3), &mut rng);
            let joint = tensor_product(a.matrix(), b.matrix());
            let back = partial_trace_b_matrix(&joint, d);
            prop_assert!(max_abs_entry(&(back - a.matrix())) < 1e-12);
        }
    }
}
