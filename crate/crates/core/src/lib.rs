//! Fusion-frame toolkit.
//!
//! Builds and certifies fusion frames (collections of subspaces of ℝ^M whose
//! projection operators sum to something sandwiched between A·I and B·I),
//! computes the LMMSE estimation error of a random vector observed through
//! noisy subspace projections — with and without subspace erasures — and
//! validates every analytic figure by brute-force composite-matrix oracles
//! and seeded Monte Carlo simulation.
//!
//! Modules:
//! - [`matcore`]: dense symmetric eigensolve, thin singular values,
//!   orthonormalization, Cholesky solves.
//! - [`frames`]: subspaces, frame operator and bounds, principal angles,
//!   chordal distances, simplex bound, packing certification, sphere
//!   embedding.
//! - [`estimation`]: error covariance, MSE with eigenvalue bounds, erasure
//!   extra-MSE, closed forms, optimal subspace dimension.
//! - [`constructions`]: quadratic-residue, Eisenstein E6*, E8, partition and
//!   random frames.
//! - [`simulation`]: counter-seeded Monte Carlo harness.
//! - [`cli`]: the `ffkit` command-line surface with stable file formats.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod estimation;
pub mod frames;
pub mod jsonio;
pub mod matcore;
pub mod rng;
pub mod simulation;

pub use error::{Error, Result};
