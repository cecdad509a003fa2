//! Exact computation of integer points on curves `y^p = f(x) * g(x)`.
//!
//! The engine reduces a curve to finitely many twist equations
//! `d * y^p = f(x)` where `d` runs over the p-th-power-free integers
//! supported on primes of the resultant `res(f, g)`.  Each twist is
//! solved exactly where a complete method exists (Pell equations for
//! the quartic families), by a bounded search, or by an external
//! solver spoken to over a line protocol.  Candidate abscissas are
//! lifted back to the original curve and every reported point is
//! re-verified by direct substitution.

pub mod algebra;
pub mod arith;
pub mod descent;
mod error;
pub mod pell;
pub mod twists;

pub use error::Error;

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
