use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::to_f64;
use crate::cli::print::{complex_to_string, rational_to_string};

/// Zero tolerance for numeric comparisons of exponents and multipliers.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// A coefficient that stays exact while only rational operations are
/// involved and degrades to double-precision complex otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Numeric(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(n.into()))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(r) => Complex64::new(to_f64(r), 0.0),
            Scalar::Numeric(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Numeric(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Exactly zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Numeric(z) => *z == Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Numeric(z) => z.norm() <= tol,
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Numeric(self.to_complex() + o.to_complex()),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Numeric(self.to_complex() * o.to_complex()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Numeric(z) => Scalar::Numeric(-z),
        }
    }

    /// `None` for an exact zero.
    pub fn inv(&self) -> Option<Self> {
        match self {
            Scalar::Exact(a) if a.is_zero() => None,
            Scalar::Exact(a) => Some(Scalar::Exact(a.recip())),
            Scalar::Numeric(z) => Some(Scalar::Numeric(z.inv())),
        }
    }

    /// Equal exactly, or within `tol` when either side is numeric.
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_complex() - o.to_complex()).norm() <= tol * (1.0 + self.abs().max(o.abs())),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", rational_to_string(r)),
            Scalar::Numeric(z) => write!(f, "{}", complex_to_string(*z)),
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Numeric(z)
    }
}

/// Exponent `rho` of `x^rho`. The multiplier of `x^rho` around the
/// singular point is `exp(2 pi i rho)`.
#[derive(Clone, Debug)]
pub enum Exponent {
    /// `rho = re + log(modulus) / (2 pi i)` with rational `re` and positive
    /// rational `modulus`; the multiplier is `modulus * exp(2 pi i re)`.
    Exact { re: BigRational, modulus: BigRational },
    Numeric(Complex64),
}

impl Exponent {
    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn rational(re: BigRational) -> Self {
        Exponent::Exact { re, modulus: BigRational::one() }
    }

    /// Exponent of a nonzero rational multiplier with `Re rho` in `[0, 1)`.
    pub fn of_rational_multiplier(lambda: &BigRational) -> Self {
        assert!(!lambda.is_zero(), "zero multiplier has no exponent");
        let re = if lambda.is_negative() { BigRational::new(1.into(), 2.into()) } else { BigRational::zero() };
        Exponent::Exact { re, modulus: lambda.abs() }
    }

    /// Exponent of a nonzero complex multiplier with `Re rho` in `[0, 1)`.
    pub fn of_multiplier(lambda: Complex64) -> Self {
        let mut arg = lambda.arg();
        if arg < 0.0 {
            arg += 2.0 * PI;
        }
        let mut re = arg / (2.0 * PI);
        if re >= 1.0 - 1e-15 {
            re = 0.0;
        }
        Exponent::Numeric(Complex64::new(re, -lambda.norm().ln() / (2.0 * PI)))
    }

    /// Exactly zero: `x^rho = 1`.
    pub fn is_zero(&self) -> bool {
        matches!(self, Exponent::Exact { re, modulus } if re.is_zero() && modulus.is_one())
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Exponent::Exact { re, modulus } => Complex64::new(to_f64(re), -to_f64(modulus).ln() / (2.0 * PI)),
            Exponent::Numeric(z) => *z,
        }
    }

    /// `exp(2 pi i rho)`, exact when `2 re` is an integer.
    pub fn multiplier(&self) -> Scalar {
        match self {
            Exponent::Exact { re, modulus } => {
                let twice = re * BigRational::from_integer(2.into());
                if twice.is_integer() {
                    let odd = twice.to_integer() % 2 != 0.into();
                    return Scalar::Exact(if odd { -modulus.clone() } else { modulus.clone() });
                }
                let ang = 2.0 * PI * to_f64(re);
                Scalar::Numeric(Complex64::from_polar(to_f64(modulus), ang))
            }
            Exponent::Numeric(z) => Scalar::Numeric((Complex64::new(0.0, 2.0 * PI) * z).exp()),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Exponent::Exact { re: a, modulus: m }, Exponent::Exact { re: b, modulus: n }) => {
                Exponent::Exact { re: a + b, modulus: m * n }
            }
            _ => Exponent::Numeric(self.to_complex() + o.to_complex()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Exponent::Exact { re, modulus } => Exponent::Exact { re: -re, modulus: modulus.recip() },
            Exponent::Numeric(z) => Exponent::Numeric(-z),
        }
    }

    /// `rho + c` for an integer `c`.
    pub fn shift(&self, c: i64) -> Self {
        self.add(&Exponent::rational(BigRational::from_integer(c.into())))
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        match (self, o) {
            (Exponent::Exact { re: a, modulus: m }, Exponent::Exact { re: b, modulus: n }) => a == b && m == n,
            _ => (self.to_complex() - o.to_complex()).norm() <= tol,
        }
    }
}

impl PartialEq for Exponent {
    fn eq(&self, o: &Self) -> bool {
        self.approx_eq(o, DEFAULT_TOLERANCE)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Exact { re, modulus } if modulus.is_one() => write!(f, "{}", rational_to_string(re)),
            Exponent::Exact { re, modulus } => {
                write!(f, "{}+log({})/(2*pi*i)", rational_to_string(re), rational_to_string(modulus))
            }
            Exponent::Numeric(z) => write!(f, "{}", complex_to_string(*z)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    #[test]
    fn multipliers() {
        assert_eq!(Exponent::rational(qf(1, 2)).multiplier(), Scalar::Exact(q(-1)));
        assert_eq!(Exponent::of_rational_multiplier(&q(-3)).multiplier(), Scalar::Exact(q(-3)));
        let w = Exponent::rational(qf(1, 3)).multiplier().to_complex();
        assert!((w - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
        let e = Exponent::of_multiplier(Complex64::new(0.0, 2.0));
        assert!((e.multiplier().to_complex() - Complex64::new(0.0, 2.0)).norm() < 1e-14);
        assert!((e.to_complex().re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn branch_in_unit_interval() {
        for k in 0..12 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 12.0);
            let re = Exponent::of_multiplier(z).to_complex().re;
            assert!((0.0..1.0).contains(&re));
        }
    }
}
