//! Exact Shannon entropies of the stationary states of the D-dimensional
//! isotropic harmonic oscillator, with an independent quadrature oracle.
//!
//! * [`hermite`] evaluates Hermite polynomials, their zeros and Gauss–Hermite rules.
//! * [`special`] holds the hypergeometric kernels and `ln n!`.
//! * [`entropy`] assembles the closed-form position, momentum and
//!   uncertainty-sum entropies.
//! * [`oracle`] integrates `-ρ ln ρ` directly.
//! * [`sweep`] and [`verify`] run batches over dimensions or degrees.

pub mod dd;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod hermite;
mod jacobi;
pub mod oracle;
pub mod special;
pub mod sweep;
pub mod verify;

pub use entropy::{EntropyReport, Evaluator, StateSpec};
pub use error::{Error, Result};
pub use exec::Execution;
pub use special::Precision;
