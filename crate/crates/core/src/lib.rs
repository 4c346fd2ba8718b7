//! Pairwise entanglement in the mixed-spin ½-½-1-1 antiferromagnetic Heisenberg ring.
//!
//! The crate is organised bottom-up:
//!
//! * [`spin`] and [`sparse`]: spin operator matrices, Clebsch-Gordan
//!   coefficients and the sparse storage used for Hamiltonians.
//! * [`chain`]: the lattice, its bond list, total-Sz sectors and Hamiltonian
//!   assembly.
//! * [`exact`]: sector-blocked full diagonalization, Lanczos, thermal and
//!   ground-state pair density matrices, spin gaps and excited-multiplet
//!   reconstruction.
//! * [`entanglement`]: SU(2)-invariant pair states, partial transpose and
//!   log-negativity.
//! * [`qmc`]: stochastic series expansion with directed loops for chains
//!   beyond exact reach.
//! * [`sweep`]: parameter sweeps, CSV emission and verification, as used by
//!   the `mixspin` binary.
//!
//! With the default `parallel` feature, sweep points, QMC walkers, sector
//! diagonalizations and sparse matrix-vector products run on rayon. Without
//! it every loop runs sequentially and produces identical output.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod entanglement;
pub mod error;
pub mod exact;
pub mod pair;
pub mod par;
pub mod provenance;
pub mod qmc;
pub mod sparse;
pub mod spin;
pub mod stats;
pub mod sweep;

pub use chain::{Bond, BondList, ChainSpec, SectorBasis};
pub use entanglement::{NegativityResult, SU2PairState};
pub use error::{Error, Result};
pub use pair::{CorrelatorEstimate, CorrelatorSource, Pair, PairDensityMatrix, PairKind};
pub use spin::SpinValue;
