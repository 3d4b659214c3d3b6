use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::GridFunction;
use crate::algebra::RationalFunction;
use crate::error::{Error, Result};

/// `sum_k a_k(x) theta^k`. Multiplication follows
/// `theta * a(x) = a(x + 1) * theta`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DifferenceForm {
    coeffs: Vec<RationalFunction>,
}

impl DifferenceForm {
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::scalar(RationalFunction::one())
    }

    /// The order-0 form `a(x)`, acting as multiplication.
    pub fn scalar(a: RationalFunction) -> Self {
        Self::new(vec![a])
    }

    pub fn theta() -> Self {
        Self::theta_pow(1)
    }

    pub fn theta_pow(k: usize) -> Self {
        let mut c = vec![RationalFunction::zero(); k + 1];
        c[k] = RationalFunction::one();
        Self::new(c)
    }

    /// `theta - gamma(x)`
    pub fn theta_minus(gamma: &RationalFunction) -> Self {
        Self::new(vec![-gamma, RationalFunction::one()])
    }

    /// Constant-coefficient form from a polynomial in `theta`.
    pub fn from_char_poly(p: &crate::algebra::Polynomial) -> Self {
        Self::new(p.coeffs().iter().cloned().map(RationalFunction::constant).collect())
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the zero form's order, standing in for minus infinity.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// `a(x) * self`
    pub fn left_scale(&self, a: &RationalFunction) -> Self {
        Self::new(self.coeffs.iter().map(|c| a * c).collect())
    }

    /// `sum_k a_k(t) f(t + k)`
    pub fn apply(&self, f: &GridFunction, t: i64) -> Result<BigRational> {
        let tq = BigRational::from_integer(t.into());
        let mut acc = BigRational::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = f.get(t + k as i64)?;
            acc += a.eval(&tq)? * v;
        }
        Ok(acc)
    }

    /// The image grid function on every `t` where all samples exist.
    pub fn apply_grid(&self, f: &GridFunction) -> Result<GridFunction> {
        let ord = self.order().unwrap_or(0) as i64;
        let len = f.len() as i64 - ord;
        if len <= 0 {
            return Err(Error::OutOfWindow(f.end()));
        }
        let values = (f.base()..f.base() + len)
            .map(|t| self.apply(f, t))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(f.base(), values)
    }

    /// True when `self` annihilates `omega` at every `t` in `lo..=hi`.
    pub fn is_root(&self, omega: &GridFunction, lo: i64, hi: i64) -> Result<bool> {
        for t in lo..=hi {
            if !self.apply(omega, t)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Left division `a = gamma * b + r` with `order(r) < order(b)`.
///
/// The quotient coefficients come from the triangular system
/// `alpha_{m-r} = sum_{j<=r} gamma_{m-n-j}(x) beta_{n-r+j}(x + m-n-j)`,
/// solved from the top row down.
pub fn form_divrem(a: &DifferenceForm, b: &DifferenceForm) -> Result<(DifferenceForm, DifferenceForm)> {
    let n = b.order().ok_or(Error::ZeroDivisor)?;
    let Some(m) = a.order().filter(|&m| m >= n) else {
        return Ok((DifferenceForm::zero(), a.clone()));
    };
    let d = m - n;
    let beta = |k: usize, shift: usize| b.coeff(k).shift_int(shift as i64);
    let mut gamma = vec![RationalFunction::zero(); d + 1];
    for r in 0..=d {
        let mut acc = a.coeff(m - r);
        for j in r.saturating_sub(n)..r {
            acc = &acc - &(&gamma[d - j] * &beta(n + j - r, d - j));
        }
        // beta_n(x + d - r) is a shift of a nonzero rational function
        gamma[d - r] = acc.checked_div(&beta(n, d - r))?;
    }
    let gamma = DifferenceForm::new(gamma);
    let rem = a - &(&gamma * b);
    debug_assert!(rem.order().is_none_or(|o| o < n));
    Ok((gamma, rem))
}

/// Division by `theta - gamma`: returns the quotient and the order-0
/// remainder, via the cascade `q_{m-1} = alpha_m`,
/// `q_{k-1} = alpha_k + q_k(x) gamma(x + k)`, `r = alpha_0 + q_0 gamma`.
pub fn ruffini_divide(a: &DifferenceForm, gamma: &RationalFunction) -> (DifferenceForm, RationalFunction) {
    let Some(m) = a.order() else {
        return (DifferenceForm::zero(), RationalFunction::zero());
    };
    if m == 0 {
        return (DifferenceForm::zero(), a.coeff(0));
    }
    let mut q = vec![RationalFunction::zero(); m];
    q[m - 1] = a.coeff(m);
    for k in (1..m).rev() {
        q[k - 1] = &a.coeff(k) + &(&q[k] * &gamma.shift_int(k as i64));
    }
    let r = &a.coeff(0) + &(&q[0] * gamma);
    (DifferenceForm::new(q), r)
}

/// Whether `b` left-divides `a` exactly.
pub fn form_divides(b: &DifferenceForm, a: &DifferenceForm) -> Result<bool> {
    Ok(form_divrem(a, b)?.1.is_zero())
}

impl Add for &DifferenceForm {
    type Output = DifferenceForm;
    fn add(self, rhs: &DifferenceForm) -> DifferenceForm {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DifferenceForm::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &DifferenceForm {
    type Output = DifferenceForm;
    fn sub(self, rhs: &DifferenceForm) -> DifferenceForm {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DifferenceForm::new((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

/// Composition: `(A B) f = A(B f)`.
impl Mul for &DifferenceForm {
    type Output = DifferenceForm;
    fn mul(self, rhs: &DifferenceForm) -> DifferenceForm {
        if self.is_zero() || rhs.is_zero() {
            return DifferenceForm::zero();
        }
        let mut out = vec![RationalFunction::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (h, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[h + k] = &out[h + k] + &(a * &b.shift_int(h as i64));
            }
        }
        DifferenceForm::new(out)
    }
}

impl Neg for &DifferenceForm {
    type Output = DifferenceForm;
    fn neg(self) -> DifferenceForm {
        DifferenceForm::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(DifferenceForm, Add::add, Sub::sub, Mul::mul);

impl fmt::Debug for DifferenceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::cli::print::form_to_string(self))
    }
}

impl fmt::Display for DifferenceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::cli::print::form_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Polynomial};

    fn poly(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::from_ints(c))
    }

    fn form(cs: &[&[i64]]) -> DifferenceForm {
        DifferenceForm::new(cs.iter().map(|c| poly(c)).collect())
    }

    #[test]
    fn apply_examples() {
        let delta = form(&[&[-1], &[1]]);
        let five = GridFunction::from_fn(0, 4, |_| q(5));
        assert_eq!(delta.apply(&five, 1).unwrap(), q(0));
        let sq = GridFunction::from_fn(0, 6, |t| q(t * t));
        assert_eq!(DifferenceForm::theta().apply(&sq, 3).unwrap(), q(16));
        let f = form(&[&[2], &[-3], &[1]]);
        let pow2 = GridFunction::from_fn(-3, 10, |t| {
            if t >= 0 { q(1 << t) } else { BigRational::new(1.into(), (1i64 << -t).into()) }
        });
        for t in -3..5 {
            assert_eq!(f.apply(&pow2, t).unwrap(), q(0));
        }
        assert_eq!(f.apply(&pow2, 6), Err(Error::OutOfWindow(7)));
    }

    #[test]
    fn apply_reports_poles() {
        let f = DifferenceForm::scalar(RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[-1, 1])).unwrap());
        let g = GridFunction::from_fn(0, 3, q);
        assert!(matches!(f.apply(&g, 1), Err(Error::PoleAtPoint(_))));
    }

    #[test]
    fn mul_examples() {
        let mx = DifferenceForm::scalar(poly(&[0, 1]));
        assert_eq!(&DifferenceForm::theta() * &mx, form(&[&[], &[1, 1]]));
        let t_minus_x = form(&[&[0, -1], &[1]]);
        // (theta - x)^2 = theta^2 - (2x + 1) theta + x^2
        assert_eq!(&t_minus_x * &t_minus_x, form(&[&[0, 0, 1], &[-1, -2], &[1]]));
        assert!((&t_minus_x * &DifferenceForm::zero()).is_zero());
    }

    #[test]
    fn divrem_examples() {
        let b = form(&[&[0, -1], &[1]]);
        let a = &b * &b;
        let (g, r) = form_divrem(&a, &b).unwrap();
        assert_eq!(g, b);
        assert!(r.is_zero());

        let (g, r) = form_divrem(&b, &b).unwrap();
        assert_eq!(g, DifferenceForm::one());
        assert!(r.is_zero());

        let a1 = form(&[&[3, 1], &[0, 0, 2]]);
        let b1 = form(&[&[1], &[1, 1]]);
        let (g, r) = form_divrem(&a1, &b1).unwrap();
        assert_eq!(g.order(), Some(0));
        assert!(r.order().is_none_or(|o| o == 0));
        assert_eq!(&(&g * &b1) + &r, a1);

        assert_eq!(form_divrem(&a1, &DifferenceForm::zero()), Err(Error::ZeroDivisor));
    }

    #[test]
    fn ruffini_examples() {
        let x = poly(&[0, 1]);
        let b = DifferenceForm::theta_minus(&x);
        let (q1, r1) = ruffini_divide(&b, &x);
        assert_eq!(q1, DifferenceForm::one());
        assert!(r1.is_zero());

        // (theta - (x+1)) (theta - x) = theta^2 - (2x+2) theta + x(x+1)
        let a = form(&[&[0, 1, 1], &[-2, -2], &[1]]);
        let (q2, r2) = ruffini_divide(&a, &x);
        assert_eq!(q2, form(&[&[-1, -1], &[1]]));
        assert!(r2.is_zero());

        // theta^2 = (theta + x + 1)(theta - x) + x(x+1)
        let (q3, r3) = ruffini_divide(&DifferenceForm::theta_pow(2), &x);
        assert_eq!(q3, form(&[&[1, 1], &[1]]));
        assert_eq!(r3, poly(&[0, 1, 1]));
    }

    #[test]
    fn divides_examples() {
        let b = form(&[&[0, -1], &[1]]);
        assert!(!form_divides(&b, &DifferenceForm::theta_pow(2)).unwrap());
        assert!(form_divides(&b, &b).unwrap());
        let g = form(&[&[1, 2], &[0, 3], &[5]]);
        assert!(form_divides(&b, &(&g * &b)).unwrap());
    }

    #[test]
    fn root_examples() {
        let pow2 = GridFunction::from_fn(0, 12, |t| q(1 << t));
        let ident = GridFunction::from_fn(0, 12, q);
        let t_minus_2 = form(&[&[-2], &[1]]);
        assert!(t_minus_2.is_root(&pow2, 0, 10).unwrap());
        assert!(!t_minus_2.is_root(&ident, 0, 10).unwrap());
        let delta2 = form(&[&[1], &[-2], &[1]]);
        assert!(delta2.is_root(&ident, 0, 9).unwrap());
    }
}
