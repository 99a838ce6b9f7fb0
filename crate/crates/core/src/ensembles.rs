//! Seeded samplers: Haar-random unitaries, GUE Hamiltonians, and the Gibbs
//! states built from them.
//!
//! All sampling is driven by explicitly owned ChaCha12 streams. A 64-bit seed
//! pins the full sample sequence bit-for-bit; independent sub-streams for
//! parallel work are derived from (seed, task index) via the generator's
//! stream parameter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::linalg::{
    eigh_raw, hermitize, BipartiteDims, CMatrix, CVector, DensityMatrix, HermitianOperator,
    UnitaryOperator, C64,
};

/// Human-readable identity of the generator backing every sampler, echoed
/// into experiment output for reproducibility.
pub const RNG_IDENTITY: &str =
    "ChaCha12 (rand_chacha::ChaCha12Rng, 64-bit seed, 64-bit stream index per task)";

/// Root stream for a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Independent stream for task `task` under the same seed.
pub fn derived_stream(seed: u64, task: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

fn standard_complex(rng: &mut impl Rng) -> C64 {
    // Standard complex normal: real and imaginary parts each of variance 1/2.
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

/// d×d matrix of i.i.d. standard complex Gaussians.
pub fn ginibre_matrix(d: usize, rng: &mut impl Rng) -> CMatrix {
    let entries: Vec<C64> = (0..d * d).map(|_| standard_complex(rng)).collect();
    // from_fn fills column-major; fix the draw order so streams are stable.
    CMatrix::from_fn(d, d, |i, j| entries[i * d + j])
}

/// Haar-distributed d×d unitary via QR of a Ginibre matrix.
///
/// The diagonal of R is normalized away: each column of Q is multiplied by
/// the phase of the corresponding R diagonal entry, which makes the result
/// the unique Q-factor with positive-diagonal R. Without this correction the
/// raw Q is not Haar distributed.
pub fn haar_unitary_matrix(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre_matrix(d, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let modulus = rjj.norm();
        if modulus > 0.0 {
            let phase = rjj / C64::new(modulus, 0.0);
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Haar-random unitary on a bipartite system.
pub fn sample_haar_unitary(dims: BipartiteDims, rng: &mut impl Rng) -> UnitaryOperator {
    let u = haar_unitary_matrix(dims.total(), rng);
    UnitaryOperator::new(u, dims).expect("phase-corrected QR factor is unitary")
}

/// GUE matrix H = (G + G†)/2 with G standard complex Ginibre.
pub fn gue_matrix(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre_matrix(d, rng);
    hermitize(&g)
}

/// GUE-distributed Hamiltonian on a bipartite system.
pub fn sample_gue_hamiltonian(dims: BipartiteDims, rng: &mut impl Rng) -> HermitianOperator {
    HermitianOperator::new(gue_matrix(dims.total(), rng), dims)
        .expect("(G + G†)/2 is Hermitian by construction")
}

/// Uncoupled Hamiltonian H_A ⊗ I + I ⊗ H_B with GUE factors. The induced
/// propagator factorizes, so the reduced witness signal vanishes identically.
pub fn sample_uncoupled_hamiltonian(dims: BipartiteDims, rng: &mut impl Rng) -> HermitianOperator {
    let ha = gue_matrix(dims.da(), rng);
    let hb = gue_matrix(dims.db(), rng);
    let ia = CMatrix::identity(dims.da(), dims.da());
    let ib = CMatrix::identity(dims.db(), dims.db());
    let h = crate::linalg::tensor_product(&ha, &ib) + crate::linalg::tensor_product(&ia, &hb);
    HermitianOperator::new(h, dims).expect("sum of Hermitian tensor factors is Hermitian")
}

/// Random density matrix from the Hilbert-Schmidt ensemble: G G† / Tr{G G†}.
pub fn sample_hs_state(dims: BipartiteDims, rng: &mut impl Rng) -> DensityMatrix {
    let d = dims.total();
    loop {
        let g = ginibre_matrix(d, rng);
        let m = &g * g.adjoint();
        let tr = m.trace().re;
        if tr > 0.0 {
            return DensityMatrix::new(m.unscale(tr), dims)
                .expect("normalized Gram matrix is a valid state");
        }
    }
}

/// Random pure state |ψ⟩⟨ψ| with |ψ⟩ Haar-distributed on the sphere.
pub fn sample_pure_state(dims: BipartiteDims, rng: &mut impl Rng) -> DensityMatrix {
    let d = dims.total();
    loop {
        let psi = CVector::from_iterator(d, (0..d).map(|_| standard_complex(rng)));
        if psi.iter().map(|z| z.norm_sqr()).sum::<f64>() > 0.0 {
            return DensityMatrix::from_pure(&psi, dims)
                .expect("normalized Gaussian vector is a valid pure state");
        }
    }
}

/// Inverse temperature and system shape for a thermal state; k is fixed to 1
/// so beta is the only temperature knob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsParams {
    beta: f64,
    dims: BipartiteDims,
}

impl GibbsParams {
    pub fn new(beta: f64, dims: BipartiteDims) -> Result<Self, Error> {
        if !beta.is_finite() {
            return Err(Error::NonFinite("beta"));
        }
        if beta < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "beta must be non-negative, got {beta}"
            )));
        }
        Ok(Self { beta, dims })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }
}

/// Thermal state e^{-βH} / Tr{e^{-βH}} via the spectral decomposition of H.
///
/// The spectrum is shifted by its minimum before exponentiation; the shift
/// cancels in the normalization and keeps large β from overflowing.
pub fn gibbs_state(h: &HermitianOperator, params: &GibbsParams) -> Result<DensityMatrix, Error> {
    if h.dims() != params.dims() {
        return Err(Error::InvalidDims(format!(
            "Hamiltonian dims {} do not match Gibbs params dims {}",
            h.dims(),
            params.dims()
        )));
    }
    let (vals, vecs) = eigh_raw(h.matrix());
    let min = vals.first().copied().unwrap_or(0.0);
    let weights: Vec<f64> = vals
        .iter()
        .map(|&l| (-params.beta() * (l - min)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        weights.len(),
        weights.iter().map(|&w| C64::new(w / z, 0.0)),
    ));
    let rho = &vecs * diag * vecs.adjoint();
    DensityMatrix::new(rho, h.dims())
}
