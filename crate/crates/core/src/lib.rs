//! Local detection of bipartite quantum discord.
//!
//! A bipartite state has zero discord with respect to subsystem A exactly
//! when dephasing it in the eigenbasis of its A marginal leaves it invariant.
//! That dephasing preserves both marginals, so the state and its dephased
//! reference are locally indistinguishable at time zero; any difference that
//! the subsequent dynamics pushes into subsystem A certifies discord in the
//! original state. This crate implements that scheme end to end:
//!
//! * [`linalg`] — dense complex linear algebra for bipartite systems: tensor
//!   products, partial traces, norms, Hermitian eigendecomposition, spectral
//!   propagators, and the validated state/operator types.
//! * [`dephasing`] — the local dephasing channel, the geometric discord
//!   measure and its purity-difference identity, the pure-state concurrence,
//!   and the reduced-dynamics lower bounds.
//! * [`ensembles`] — seeded samplers for Haar-random unitaries (QR of a
//!   Ginibre matrix with phase correction), GUE Hamiltonians, and Gibbs
//!   states.
//! * [`haar`] — closed-form mean and variance of the witness observable over
//!   Haar-random unitaries, plus a Monte Carlo cross-check.
//! * [`witness`] — the witness trajectory dist(t), Kraus-map evolution, and
//!   the effective environment dimension inferred from the long-time average.
//! * [`cli`] — seeded, reproducible experiment runners with CSV output,
//!   surfaced by the `discord-witness` binary.

pub mod cli;
pub mod dephasing;
pub mod ensembles;
pub mod error;
pub mod haar;
pub mod linalg;
pub mod witness;

pub use error::Error;
pub use linalg::{
    BipartiteDims, CMatrix, CVector, DensityMatrix, HermitianOperator, SpectralDecomposition,
    UnitaryOperator, C64,
};

pub use dephasing::{DephasingBasis, DiscordBounds};
pub use ensembles::GibbsParams;
pub use haar::{HaarStats, MonteCarloStats};
pub use witness::{EffectiveDimension, KrausMap, TimeGrid, WitnessTrajectory};
