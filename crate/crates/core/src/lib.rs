//! Kantorovich-type constants, s-convexity certificates and operator-inequality
//! verifiers for positive real-symmetric matrices.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, report formats and the command line live in the
//! `kaudit` companion crate.
//!
//! Module map:
//!
//! - [`linalg`]: symmetric matrices, cyclic Jacobi eigensolver, functional
//!   calculus, quadratic forms and spectral summaries.
//! - [`function`]: the scalar functions `t^r` and `log_b t`.
//! - [`sconvex`]: grid certification of s-convexity (second sense), the
//!   maximal certified `s`, and the `theta` estimate for the logarithm.
//! - [`bounds`]: extrema of `h(t)` and `u(t)`, regime classification and the
//!   constants `K_f`, `K_f^d` and `K_log`.
//! - [`audit`]: instance generators, verifiers for each inequality, fuzz
//!   campaigns and adversarial tightness search.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod audit;
pub mod bounds;
pub mod error;
pub mod function;
pub mod linalg;
pub mod rng;
pub mod sconvex;

pub use error::{Error, Result};
pub use function::ScalarFunction;
pub use linalg::{HermitianMatrix, SpectralDecomposition, SpectralWindow, UnitVector};
