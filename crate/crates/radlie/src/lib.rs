//! Structure theory inside matrix algebras `M_n(C)` at desk scale:
//! Jacobson radicals, spectra and holomorphic functional calculus by contour
//! quadrature, Sylvester operators with contour resolvents, Cartan/root and
//! Fitting decompositions of Lie subalgebras, and seeded verification suites
//! that exercise the structural identities on random instances.
//!
//! Everything operates on dense complex matrices with `n <= 64`, with
//! deterministic algorithms throughout: a fixed seed reproduces every
//! instance, residual and report byte for byte.

mod error;
pub mod tol;

pub mod algebra;
pub mod lab;
pub mod lie;
pub mod linalg;
pub mod spectral;
pub mod sylvester;

pub use error::{Error, Result};
pub use tol::TolerancePolicy;
