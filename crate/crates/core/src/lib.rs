//! Two-dimensional coined quantum walks on the periodic `N × N` lattice.
//!
//! The walker carries a four-state chirality `(R, L, U, D)`; each step applies
//! a 4×4 unitary [`Coin`] and then moves each chirality component one site in
//! its direction. Besides direct evolution ([`evolve`]), the crate
//! diagonalizes the walk in momentum space ([`spectral`]) and evaluates
//! long-time averages of the return probability ([`timeavg`]).

pub mod coin;
pub mod error;
pub mod evolve;
pub mod spectral;
pub mod state;
pub mod timeavg;

pub use coin::{Chirality, Coin, CoinMatrix};
pub use error::{Result, WalkError};
pub use evolve::{evolve, step, Evolver, Stepper};
pub use spectral::{build_block, evolve_spectral, MomentumBlock, SpectralDecomposition};
pub use state::{GridMetadata, InitialSpec, Lattice, ProbabilityGrid, Spinor, WalkState};
