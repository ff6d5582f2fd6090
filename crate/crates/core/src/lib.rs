//! Exact real Ehrhart quasi-polynomials of rational polytopes.
//!
//! For a rational polytope `P` and a real dilation factor `t`, the lattice
//! point counts `L(P, t) = #(tP ∩ ℤ^N)` and `L(P̊, t)` are quasi-polynomials
//! `Σ_k c_k(t)·t^k` whose coefficients are periodic piecewise polynomials.
//! This crate computes them exactly over the rationals:
//!
//! * [`simplex`] counts determined sets of a simplex as step functions,
//! * [`quasi`] turns those into coefficient functions,
//! * [`polytope`] triangulates a polytope and sums cell contributions,
//! * [`oracle`] and [`verify`] cross-check everything by brute force.
//!
//! ```
//! use ehrhart::{polytope_quasi, Kind, Rational, RationalPolytope, DEFAULT_BUDGET};
//!
//! let square = RationalPolytope::from_int_points(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
//! let closed = polytope_quasi(&square, Kind::Closed, DEFAULT_BUDGET).unwrap();
//! assert_eq!(closed.eval(&"3/2".parse().unwrap()), Rational::from(4));
//! ```

pub mod arith;
pub mod error;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod polytope;
pub mod quasi;
pub mod simplex;
pub mod verify;

pub use arith::{Rational, RationalMatrix, RationalVector};
pub use error::{Error, Result};
pub use oracle::{barycentric, brute_count, random_polytope, CountQuery, CountTarget};
pub use poly::Polynomial;
pub use polytope::{
    polytope_quasi, triangulate, volume, Decomposition, OpenCell, RationalPolytope,
};
pub use quasi::{
    derivative_piecewise, eval_binomial_formula, eval_quasi, simplex_coefficients,
    PeriodicPiecewisePolynomial, QuasiPolynomial, Window,
};
pub use simplex::{determined_sets, Interval, Kind, RationalSimplex, StepFunction, DEFAULT_BUDGET};
