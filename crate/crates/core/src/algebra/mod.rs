//! Exact arithmetic: rationals, dense univariate polynomials, rational
//! functions, polynomials in an auxiliary variable `y` over `Q(x)`, and
//! Gaussian elimination over any of these fields.

mod bivariate;
mod field;
mod linalg;
mod poly;
mod ratfunc;

pub use bivariate::{bezout_in_y, resultant_in_y, Bezout, BivariatePolynomial};
pub use field::Field;
pub use linalg::{determinant, inverse, matmul, nullspace, rank, rref, solve, Matrix};
pub use poly::{rational_roots, squarefree_decomposition, Polynomial};
pub use ratfunc::RationalFunction;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`.
pub fn qf(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational to double.
pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator out of f64 range: scale both down
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let nn = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let dd = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
        nn / dd
    })
}
