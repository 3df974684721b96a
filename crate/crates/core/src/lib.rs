//! Arithmetic on quantum amplitudes, checked on a dense statevector
//! simulator.
//!
//! Builders emit [`sim::Circuit`]s whose flag amplitude carries a computed
//! value: products and sums of `cosθ` factors ([`primitives`]), the binary
//! value of a data register ([`stateprep`]), eigenvalue reciprocals of a
//! tridiagonal Toeplitz matrix ([`linsys`]) and piecewise polynomials
//! ([`polyeval`]).

pub mod cli;
pub mod error;
pub mod linsys;
pub mod polyeval;
pub mod primitives;
pub mod sim;
pub mod stateprep;

pub use error::{QaaError, Result};
