//! Numerical core for real-space adiabatic annealing experiments.
//!
//! The crate discretizes Schrodinger operators `-Δ + λ²f` and Witten
//! Laplacians `-Δ + β²‖∇f‖² - βΔf` on uniform tensor grids with Dirichlet
//! boundaries, computes their low-lying spectra and spectral gaps, propagates
//! the time-dependent annealing schedule with Crank-Nicolson steps, and runs
//! a suite of classical global optimizers (Langevin/SGD, basin hopping,
//! simulated annealing, differential evolution, convexity honing, Hessian
//! block recovery) on the shared benchmark-function corpus.
//!
//! Everything here is pure computation over `alloc` containers; file formats,
//! the command line, threading and wall clocks live in the companion `rsaa`
//! binary crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod adiabatic;
pub mod classical;
pub mod error;
pub(crate) mod fx;
pub mod functions;
pub mod grid;
pub mod linalg;
pub mod morse;
pub mod rng;
pub mod spectral;

pub use error::Error;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
