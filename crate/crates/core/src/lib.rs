//! Free bi-Poisson Markov processes.
//!
//! The process is built from its orthogonal polynomials: marginal laws and
//! transition kernels are the spectral measures of explicit Jacobi data.
//! The crate constructs those measures (density plus atoms), samples paths,
//! and checks the algebraic and probabilistic identities the construction
//! rests on, either exactly over the rationals or in floating point.

pub mod error;
pub mod freeconv;
pub mod poly;
pub mod process;
pub mod recurrences;
pub mod scalar;
pub mod series;
pub mod spectra;

pub use error::{Error, Result};
pub use poly::Poly;
pub use recurrences::ProcessParams;
pub use scalar::{Rational, Ring, Scalar};
pub use series::FormalSeries;
