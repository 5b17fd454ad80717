//! Spectral solver and verification harness for the wave equation
//! `u_tt - a(t) L u = 0` on compact Lie groups, where `L` is a sum of squares
//! of left-invariant vector fields (a sub-Laplacian when the fields satisfy a
//! Hörmander condition).
//!
//! The group Fourier transform decouples the equation into independent scalar
//! mode ODEs `v'' + a(t) nu^2 v = 0`, one per eigenvalue `nu` of the diagonal
//! matrix symbol of `-L`. This crate implements the SU(2) (Wigner matrix) and
//! torus backends, the decoupled solver, and numerical verification of the
//! energy, Sobolev-loss and Gevrey well-posedness estimates for four classes
//! of propagation speed `a(t)`:
//!
//! * case 1 — `a >= a0 > 0`, `a` in `C^1`: symmetriser energy, no loss in the
//!   `L`-adapted Sobolev scale, loss `1/r` in the classical scale;
//! * case 2 — `a >= a0 > 0`, `a` Hölder of order `alpha < 1`: Gevrey
//!   well-posedness for `s < 1 + alpha/(1-alpha)` via mollified
//!   characteristic roots;
//! * case 3 — `a >= 0`, `a` in `C^l`, `l >= 2`: quasi-symmetriser energy,
//!   Gevrey well-posedness for `s < 1 + l/2`;
//! * case 4 — `a >= 0`, `a` Hölder of order `alpha < 2`: shifted mollified
//!   roots, Gevrey well-posedness for `s < 1 + alpha/2`.

pub mod cauchy;
mod error;
pub mod experiments;
pub mod fourier;
pub mod group_harmonics;
pub mod mode_solver;
pub mod numeric;
pub mod spaces;
pub mod speeds;
pub mod symbols;

pub use error::{Error, Result};
