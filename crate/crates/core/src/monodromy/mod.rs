//! Formal local solutions at a regular singular point and the action of
//! the monodromy operator `theta` on them.
//!
//! A solution is a finite sum of terms `c * x^rho * t^k` with
//! `t = log(x - x1) / (2 pi i)`, so one tour around `x1` maps `x^rho` to
//! `exp(2 pi i rho) x^rho` and `t` to `t + 1`.

mod formal;
mod scalar;
mod structure;

pub use formal::{theta_determinant, FormalLocalSolution, Term};
pub use scalar::{Exponent, Scalar, DEFAULT_TOLERANCE};
pub use structure::{
    canonical_fundamental_system, canonical_from_structure, characteristic_polynomial,
    companion_difference_equation, local_structure, minimal_relation, theta_action_matrix,
    ConstantForm, EigenBlock, LocalStructure, Mode, MonodromySpec,
};
