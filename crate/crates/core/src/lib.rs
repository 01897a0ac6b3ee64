//! Exact Chebyshev-series machinery for solutions of linear ODEs with
//! polynomial coefficients (D-finite functions) on `[-1, 1]`.
//!
//! The crate computes near-minimax polynomial approximations of such
//! solutions by unrolling the recurrence satisfied by their Chebyshev
//! coefficients backwards from a large index, and then *certifies* a
//! two-sided enclosure of the uniform approximation error through a
//! Volterra integral fixed-point argument. All quantities entering a
//! certificate are exact rationals; floating point is used only in
//! heuristics (choice of the start index, initial root guesses).
//!
//! Main entry points:
//! - [`chebpoly::ChebPoly`]: dense Chebyshev-basis polynomials over `Q`.
//! - [`oreops::DiffOp`] / [`oreops::IvpProblem`]: differential operators
//!   and boundary/initial conditions.
//! - [`chebrec::chebyshev_recurrence`]: the recurrence operator acting on
//!   Chebyshev coefficient sequences.
//! - [`solver::approximate`]: degree-`d` approximation of the solution by
//!   block backward recurrence plus an exact linear solve.
//! - [`ratcheb::expand_product`]: Chebyshev expansion of
//!   `rational function x polynomial` with a certified error budget.
//! - [`validator::validate`]: rigorous enclosure `[b, B]` of the uniform
//!   error of a candidate approximation.

pub mod asymptotics;
pub mod bigfloat;
pub mod chebpoly;
pub mod chebrec;
mod error;
pub mod interval;
pub mod oreops;
pub mod qpoly;
pub mod ratcheb;
pub mod rat;
pub mod roots;
pub mod solver;
pub mod validator;

pub use error::Error;
pub use rat::Rat;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
