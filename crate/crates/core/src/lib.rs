//! Exact and numerical toolkit for reflection matrices of rational
//! so/sp/osp-invariant R matrices and the analytical Bethe ansatz of the
//! corresponding open spin chains.
//!
//! The symbolic layer (Gaussian rationals, rational functions, graded
//! matrices) proves operator identities — Yang–Baxter, crossing-unitarity,
//! reflection equations — by exact arithmetic. The numerical layer
//! (transfer-matrix spectra, Bethe-root solving, Fourier kernels, boundary
//! amplitudes) reproduces the spectral and scattering formulas with
//! independent cross-checks.

pub mod error;
pub mod gaussian;
pub mod grading;
pub mod poly;
pub mod ratfunc;

pub mod gmatrix;
pub mod rmatrix;

pub mod boundary;
pub mod chain;

pub mod bethe;
pub mod thermo;

pub mod scattering;
pub mod special;

pub mod report;

pub use error::{Error, Result};
pub use gaussian::Gaussian;
pub use grading::GradingSpec;
pub use poly::{Poly, Poly2};
pub use ratfunc::{RatFunc, RatFunc2};
