//! Periodic spectrum of the planar vectorial p-Laplacian.
//!
//! This crate computes the closed orbits and periodic eigenvalues of the
//! planar system (phi_p(x'))' + lambda phi_p(x) = 0, where
//! phi_p(v) = ||v||^(p-2) v is the duality map of the plane. After energy
//! normalization every nonzero solution is classified by a single momentum
//! parameter mu in [0, 1], and two scalar functions of mu drive the whole
//! theory:
//!
//! * `T(mu)`: the normalized period of the radial oscillation, and
//! * `S(mu)`: the phase winding accumulated over one radial period,
//!
//! both computed in [`periodfun`] as singular integrals over the orbit's
//! radial band. Momenta where `S(mu)` is rational ell/m give orbits that
//! close after m radial oscillations, and each closed family contributes
//! the eigenvalue ladder built in [`spectrum`]. The trajectories
//! themselves, in both reduced and planar coordinates, live in
//! [`dynamics`], which also provides independent ODE-based checks of the
//! quadrature results. [`specfun`] holds the underlying special functions
//! and [`io_cli`] the artifact and command layer shared by the `plap`
//! binary and the examples.
//!
//! Numerical building blocks (Gauss-Legendre and tanh-sinh quadrature, an
//! adaptive Runge-Kutta integrator with dense output, and a bracketed root
//! finder) are in [`num`].

// Reference values are kept at the full precision of the sources they were
// derived from, even where that exceeds what an f64 literal can resolve.
#![allow(clippy::excessive_precision)]

pub mod dynamics;
pub mod error;
pub mod io_cli;
pub mod num;
pub mod periodfun;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
