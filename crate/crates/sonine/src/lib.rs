//! Sonine kernel pairs, general fractional integrals and derivatives, and
//! operational-calculus solvers for fractional differential equations, all
//! on the algebra of generalized power series.

pub mod error;
pub mod fde;
pub mod hseries;
pub mod kernels;
pub mod opcalc;
pub mod operators;
pub mod specfun;

pub use error::{Error, Result};
pub use hseries::{Evaluation, HSeries, HTerm, TruncationPolicy};
pub use kernels::{KernelSpec, SoninePair};
