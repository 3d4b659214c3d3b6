use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;

use super::{determinant, Polynomial, RationalFunction};
use crate::error::{Error, Result};

/// Polynomial in `y` with coefficients in `Q(x)`, low to high in `y`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePolynomial {
    coeffs: Vec<RationalFunction>,
}

impl BivariatePolynomial {
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: RationalFunction) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `y`.
    pub fn y() -> Self {
        Self::new(vec![RationalFunction::zero(), RationalFunction::one()])
    }

    /// `c * y^k`
    pub fn term(c: RationalFunction, k: usize) -> Self {
        let mut v = vec![RationalFunction::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> RationalFunction {
        self.coeffs.get(j).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `df/dy`
    pub fn diff_y(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale(&BigRational::from_integer(j.into())))
                .collect(),
        )
    }

    /// `df/dx`, coefficientwise.
    pub fn diff_x(&self) -> Self {
        Self::new(self.coeffs.iter().map(RationalFunction::derivative).collect())
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree_y().ok_or(Error::DivisionByZero)?;
        let lc_inv = d.leading().checked_inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![RationalFunction::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dc);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Remainder modulo `d` in `Q(x)[y]`.
    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    pub fn eval_complex(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c.eval_complex(x))
    }

    /// Coefficients in `y` evaluated at a complex `x`.
    pub fn y_coeffs_at(&self, x: Complex64) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.eval_complex(x)).collect()
    }

    /// Multiply through by the lcm of the coefficient denominators, so
    /// every `y`-coefficient becomes a polynomial.
    pub fn clear_denominators(&self) -> Self {
        let l = self
            .coeffs
            .iter()
            .fold(Polynomial::one(), |acc, c| {
                let g = acc.gcd(c.den());
                &acc * &c.den().exact_div(&g).expect("gcd divides")
            });
        self.scale(&RationalFunction::from_poly(l))
    }

    /// Substitute a constant rational for `x`; `None` at a pole.
    pub fn specialize_x(&self, x0: &BigRational) -> Option<Polynomial> {
        let cs: Option<Vec<_>> = self.coeffs.iter().map(|c| c.eval(x0).ok()).collect();
        cs.map(Polynomial::new)
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BivariatePolynomial::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BivariatePolynomial::new((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return BivariatePolynomial::zero();
        }
        let mut out = vec![RationalFunction::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BivariatePolynomial::new(out)
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::cli::print::bivariate_to_string(self))
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::cli::print::bivariate_to_string(self))
    }
}

/// Result of [`bezout_in_y`]: `a*f + b*f_y = phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bezout {
    pub a: BivariatePolynomial,
    pub b: BivariatePolynomial,
    pub phi: RationalFunction,
}

/// `Res_y(f, g)` as the Sylvester determinant over `Q(x)`.
pub fn resultant_in_y(f: &BivariatePolynomial, g: &BivariatePolynomial) -> RationalFunction {
    let (Some(m), Some(n)) = (f.degree_y(), g.degree_y()) else {
        return RationalFunction::zero();
    };
    let size = m + n;
    if size == 0 {
        return RationalFunction::one();
    }
    let mut syl = vec![vec![RationalFunction::zero(); size]; size];
    // rows hold coefficients high to low, the usual Sylvester layout
    for i in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            syl[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            syl[n + i][i + k] = c.clone();
        }
    }
    determinant(&syl)
}

/// Bezout identity `A f + B f_y = phi(x)` with `phi` free of `y`.
///
/// `phi` is the primitive polynomial (positive leading coefficient) of
/// least degree for which `A` and `B` are polynomial in `x`; it divides
/// `Res_y(F, F_y)` for `F` equal to `f` with denominators cleared.
pub fn bezout_in_y(f: &BivariatePolynomial) -> Result<Bezout> {
    let m = f.degree_y().ok_or(Error::ZeroPolynomial)?;
    if m == 0 {
        return Err(Error::Invalid("f must have positive degree in y".into()));
    }
    let fy = f.diff_y();
    // extended Euclid in Q(x)[y]
    let (mut r0, mut r1) = (f.clone(), fy.clone());
    let (mut s0, mut s1) = (BivariatePolynomial::constant(RationalFunction::one()), BivariatePolynomial::zero());
    let (mut t0, mut t1) = (BivariatePolynomial::zero(), BivariatePolynomial::constant(RationalFunction::one()));
    while !r1.is_zero() {
        let (qt, r) = r0.div_rem(&r1)?;
        let s = &s0 - &(&qt * &s1);
        let t = &t0 - &(&qt * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.degree_y() != Some(0) {
        return Err(Error::NotSquarefree);
    }
    let g = r0.coeff(0);
    let (a, b) = (s0.scale(&g.checked_inv()?), t0.scale(&g.checked_inv()?));
    // smallest polynomial phi making phi * a and phi * b free of denominators
    let mut den = Polynomial::one();
    for c in a.coeffs().iter().chain(b.coeffs()) {
        den = &den * &c.den().exact_div(&c.den().gcd(&den)).expect("gcd divides");
    }
    let phi = RationalFunction::from_poly(den.primitive());
    Ok(Bezout { a: a.scale(&phi), b: b.scale(&phi), phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::from_ints(c))
    }

    fn check_identity(f: &BivariatePolynomial, bz: &Bezout) {
        let lhs = &(&bz.a * f) + &(&bz.b * &f.diff_y());
        assert_eq!(lhs, BivariatePolynomial::constant(bz.phi.clone()));
    }

    #[test]
    fn sqrt_x() {
        // y^2 - x
        let f = BivariatePolynomial::new(vec![rf(&[0, -1]), rf(&[]), rf(&[1])]);
        let bz = bezout_in_y(&f).unwrap();
        assert_eq!(bz.phi, rf(&[0, 1]));
        assert_eq!(bz.a, BivariatePolynomial::constant(rf(&[-1])));
        assert_eq!(bz.b, BivariatePolynomial::term(RationalFunction::constant(qf(1, 2)), 1));
        check_identity(&f, &bz);
    }

    #[test]
    fn linear_in_y() {
        let f = BivariatePolynomial::new(vec![rf(&[0, -1]), rf(&[1])]);
        let bz = bezout_in_y(&f).unwrap();
        assert!(bz.a.is_zero());
        assert_eq!(bz.b, BivariatePolynomial::constant(rf(&[1])));
        assert_eq!(bz.phi, rf(&[1]));
    }

    #[test]
    fn quadratic_discriminant() {
        // a y^2 + 2 b y + c with a = x+1, b = x^2, c = 3
        let (a, b, c) = (rf(&[1, 1]), rf(&[0, 0, 1]), rf(&[3]));
        let f = BivariatePolynomial::new(vec![c.clone(), b.scale(&q(2)), a.clone()]);
        let bz = bezout_in_y(&f).unwrap();
        check_identity(&f, &bz);
        let disc = &(&a * &c) - &(&b * &b);
        let ratio = bz.phi.checked_div(&disc).unwrap();
        assert!(ratio.as_constant().is_some());
        let cleared = f.clear_denominators();
        let res = resultant_in_y(&cleared, &cleared.diff_y());
        assert!(res.checked_div(&bz.phi).unwrap().is_polynomial());
    }

    #[test]
    fn repeated_root_rejected() {
        // (y - x)^2
        let f = BivariatePolynomial::new(vec![rf(&[0, 0, 1]), rf(&[0, -2]), rf(&[1])]);
        assert_eq!(bezout_in_y(&f), Err(Error::NotSquarefree));
    }
}
