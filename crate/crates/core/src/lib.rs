//! Quantum walks on a one-dimensional bipartite lattice whose `B` sites leak.
//!
//! The walker starts on `A_S` and eventually leaves the lattice through the
//! lossy `B` sites. This crate computes where it leaves (the decay
//! distribution `P_n`), the complex spectra of the open and ring lattices,
//! and the diagnostics used to tell an edge burst from skin localization.

pub mod dynamics;
pub mod error;
pub mod metrics;
pub mod model;
pub mod spectral;

pub use dynamics::{
    decay_distribution, decay_distribution_closed_form, decay_distribution_ode, decay_distribution_schur,
    decay_distribution_spectral, evolve_step, DecayDistribution, DecayMethod, DecayRoute, IntegratorConfig, StartCell, WalkerState,
};
pub use error::{Error, Result};
pub use metrics::{edge_burst_metrics, EdgeBurstMetrics};
pub use model::{
    bloch_matrix, bloch_spectrum, build_hamiltonian, site_index, BoundaryCondition, Hamiltonian, LatticeParams,
    LossProfile, Sublattice,
};
pub use spectral::{
    eigensystem, imaginary_gap, ipr_per_sublattice, mean_displacement, spectra_compare, DisplacementPair, Spectrum,
};
