//! Numerical harmonic analysis on Euclidean space and on rank-one symmetric
//! spaces, together with an engine that certifies the growth inequalities
//! linking the Fourier transform to spherical-mean differences.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: normalized spherical Bessel functions, Jacobi functions of
//!   the first kind, the radial density and the Harish-Chandra c-function.
//! * [`quad`]: adaptive Gauss-Kronrod, tanh-sinh and fixed Gauss-Legendre
//!   rules plus reproducible evaluation grids.
//! * [`euclid`]: radial Fourier transforms on R^n, spherical means, L^p
//!   norms and the growth/tail functionals.
//! * [`hyp`]: the Jacobi transform, its Plancherel inverse, hyperbolic
//!   spherical means and the spectral functionals on symmetric spaces.
//! * [`certify`]: grid sweeps producing [`certify::CertReport`] records.
//! * [`run`]: configuration, defaults, report bundles and file emitters used
//!   by the `growthfx` binary.

pub mod certify;
pub mod error;
pub mod euclid;
pub mod hyp;
pub mod quad;
pub mod run;
pub mod specfun;

pub use error::{Error, Result};
