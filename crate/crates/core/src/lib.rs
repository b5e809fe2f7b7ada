//! Fourier-spectral laboratory for the nonlocal parabolic equation
//! `u_t = u_xx + J u_x + f(x, u, u_x) + K u` on the circle.
//!
//! The crate covers the trigonometric basis and transforms ([`fourier`]),
//! the linear operators ([`operators`]), the smooth nonlinearity
//! ([`nonlinearity`]), an IMEX semiflow ([`semiflow`]), linearized spectra
//! ([`spectra`]) and the parity-based verification pipeline ([`verdict`]).

pub mod cli;
pub mod config;
pub mod error;
pub mod fourier;
pub mod nonlinearity;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod semiflow;
pub mod spectra;
pub mod verdict;

pub use error::{Error, Result};
pub use fourier::{BasisLayout, Mode, TrigVector};
pub use nonlinearity::ModelParams;
pub use operators::{EpsilonSequence, OperatorMatrix};
