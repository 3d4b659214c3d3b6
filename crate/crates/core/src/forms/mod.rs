//! Linear difference forms `sum a_k(x) theta^k` over `Q(x)`, where
//! `theta f(x) = f(x + 1)`, and the constant-coefficient theory built on
//! their characteristic polynomials.

mod cauchy;
mod form;
mod grid;

pub use cauchy::{
    cauchy_partial_fractions, characteristic_roots, const_coeff_basis, BasisElement,
    CharacteristicRoots, PartialFraction, Root, RootMode,
};
pub use form::{form_divides, form_divrem, ruffini_divide, DifferenceForm};
pub use grid::GridFunction;
