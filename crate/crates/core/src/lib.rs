//! Exact finite-difference operator calculus.
//!
//! * [`algebra`]: rationals, polynomials, rational functions, bivariate
//!   polynomials and exact linear algebra.
//! * [`forms`]: difference forms `sum a_k(x) theta^k`, division, roots and
//!   constant-coefficient resolution.
//! * [`dependence`]: Casoratians and windowed rank analysis of sequences.
//! * [`monodromy`]: formal local solutions and the monodromy action.
//! * [`transforms`]: the kernel transform between differential operators
//!   and difference relations.
//! * [`algebraic_ode`]: linear ODEs annihilating algebraic functions.
//! * [`operators`]: functional calculus on truncated polynomial spaces.
//! * [`cli`]: expression parser, printer and command-line front-end.

pub mod algebra;
pub mod algebraic_ode;
pub mod cli;
pub mod dependence;
pub mod error;
pub mod forms;
pub mod monodromy;
pub mod numeric;
pub mod operators;
pub mod transforms;

pub use error::{Error, Result};
