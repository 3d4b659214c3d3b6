//! The kernel transform `f(x) = integral phi(y) y^(x-1) dy` between linear
//! differential operators with polynomial coefficients and difference
//! relations. Integrating by parts (boundary terms dropped) gives
//!
//! `integral y^lambda phi^(r)(y) y^(x-1) dy
//!     = (-1)^r (x+lambda-1)(x+lambda-2)...(x+lambda-r) f(x+lambda-r)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Polynomial, RationalFunction};
use crate::cli::print::{poly_to_string, rational_to_string};
use crate::forms::DifferenceForm;

/// `sum a_{lambda,r} y^lambda phi^(r)(y)`, keyed by `(lambda, r)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialOperator {
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

impl DifferentialOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u32, u32, BigRational)>) -> Self {
        let mut op = Self::new();
        for (lambda, r, a) in entries {
            op.add_term(lambda, r, a);
        }
        op
    }

    pub fn add_term(&mut self, lambda: u32, r: u32, a: BigRational) {
        let slot = self.coeffs.entry((lambda, r)).or_insert_with(BigRational::zero);
        *slot += a;
        if slot.is_zero() {
            self.coeffs.remove(&(lambda, r));
        }
    }

    /// Nonzero entries `(lambda, r, a)` in increasing `(lambda, r)` order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &BigRational)> {
        self.coeffs.iter().map(|(&(l, r), a)| (l, r, a))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_entries(self.entries().map(|(l, r, a)| (l, r, a * c)))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_entries(self.entries().chain(o.entries()).map(|(l, r, a)| (l, r, a.clone())))
    }
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (l, r, a) in self.entries() {
            let mut body = match l {
                0 => String::new(),
                1 => "y*".into(),
                _ => format!("y^{l}*"),
            };
            body.push_str(&if r == 0 { "phi".into() } else { format!("phi^({r})") });
            let mag = rational_to_string(&a.abs());
            let term = if a.abs().is_one() { body } else { format!("{mag}*{body}") };
            match (out.is_empty(), a.is_negative()) {
                (true, false) => out.push_str(&term),
                (true, true) => out.push_str(&format!("-{term}")),
                (false, false) => out.push_str(&format!(" + {term}")),
                (false, true) => out.push_str(&format!(" - {term}")),
            }
        }
        write!(f, "{}", if out.is_empty() { "0" } else { &out })
    }
}

/// `sum_s c_s(x) f(x + s) = 0`, keyed by the shift `s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftedDifferenceRelation {
    terms: BTreeMap<i64, Polynomial>,
}

impl ShiftedDifferenceRelation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Polynomial)>) -> Self {
        let mut rel = Self::new();
        for (s, c) in terms {
            rel.add_term(s, &c);
        }
        rel
    }

    pub fn add_term(&mut self, shift: i64, c: &Polynomial) {
        let slot = self.terms.entry(shift).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&shift);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Polynomial> {
        &self.terms
    }

    pub fn coeff(&self, shift: i64) -> Polynomial {
        self.terms.get(&shift).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&s, p)| (s, p.scale(c))))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(o.terms.iter()).map(|(&s, p)| (s, p.clone())))
    }

    /// `sum_s c_s(x) f(x + s)` at an integer point.
    pub fn eval(&self, f: impl Fn(i64) -> BigRational, x: i64) -> BigRational {
        let xq = BigRational::from_integer(x.into());
        self.terms.iter().map(|(&s, c)| c.eval(&xq) * f(x + s)).sum()
    }
}

impl fmt::Display for ShiftedDifferenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&s, c)| {
                let arg = match s {
                    0 => "x".to_string(),
                    s if s > 0 => format!("x+{s}"),
                    s => format!("x-{}", -s),
                };
                format!("({})*f({arg})", poly_to_string(c))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `(x + lambda - 1)(x + lambda - 2)...(x + lambda - r)`; 1 when `r = 0`.
fn falling(lambda: i64, r: u32) -> Polynomial {
    (1..=r as i64).fold(Polynomial::one(), |acc, i| {
        &acc * &Polynomial::new(vec![BigRational::from_integer((lambda - i).into()), BigRational::one()])
    })
}

fn sign(r: u32) -> BigRational {
    BigRational::from_integer(if r % 2 == 0 { 1.into() } else { (-1).into() })
}

/// Image of a differential operator: `(lambda, r, a)` contributes
/// `(-1)^r a (x+lambda-1)...(x+lambda-r)` at shift `lambda - r`.
pub fn diff_to_difference(op: &DifferentialOperator) -> ShiftedDifferenceRelation {
    let mut rel = ShiftedDifferenceRelation::new();
    for (lambda, r, a) in op.entries() {
        let c = falling(lambda as i64, r).scale(&(sign(r) * a));
        rel.add_term(lambda as i64 - r as i64, &c);
    }
    rel
}

/// Preimage under [`diff_to_difference`], or `None` if the relation is not
/// an image.
///
/// At shift `s` the image basis is `(-1)^r (x+s)(x+s+1)...(x+s+r-1)` for
/// `r >= max(0, -s)`, one polynomial of each degree `r`, so each
/// coefficient is decomposed by peeling off leading terms.
pub fn difference_to_diff(rel: &ShiftedDifferenceRelation) -> Option<DifferentialOperator> {
    let mut op = DifferentialOperator::new();
    for (&s, c) in rel.terms() {
        let r_min = (-s).max(0) as u32;
        let mut rem = c.clone();
        while let Some(d) = rem.degree() {
            let r = d as u32;
            if r < r_min {
                return None;
            }
            let lambda = s + r as i64;
            let basis = falling(lambda, r).scale(&sign(r));
            let a = rem.leading() * sign(r);
            rem = &rem - &basis.scale(&a);
            op.add_term(lambda as u32, r, a);
        }
    }
    Some(op)
}

/// The relation as a difference form: with `offset = max(0, -s_min)`,
/// `a_k(x) = c_(k - offset)(x + offset)`, so applying the form at `t`
/// evaluates the relation at `x = t + offset`.
pub fn as_theta_form(rel: &ShiftedDifferenceRelation) -> (DifferenceForm, i64) {
    let Some((&s_min, _)) = rel.terms().first_key_value() else {
        return (DifferenceForm::zero(), 0);
    };
    let offset = (-s_min).max(0);
    let s_max = *rel.terms().last_key_value().unwrap().0;
    let coeffs = (0..=(s_max + offset))
        .map(|k| RationalFunction::from_poly(rel.coeff(k - offset).shift_int(offset)))
        .collect();
    (DifferenceForm::new(coeffs), offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::forms::GridFunction;

    fn factorial(n: i64) -> BigRational {
        (1..=n).fold(q(1), |acc, k| acc * q(k))
    }

    fn gamma_op() -> DifferentialOperator {
        DifferentialOperator::from_entries([(0, 1, q(1)), (0, 0, q(1))])
    }

    #[test]
    fn gamma_recurrence() {
        let rel = diff_to_difference(&gamma_op());
        let expect = ShiftedDifferenceRelation::from_terms([(0, Polynomial::one()), (-1, Polynomial::from_ints(&[1, -1]))]);
        assert_eq!(rel, expect);
        for n in 2..=20 {
            assert_eq!(rel.eval(|k| factorial(k - 1), n), q(0));
        }
    }

    #[test]
    fn beta_recurrence() {
        for a in 1..=3 {
            let op = DifferentialOperator::from_entries([(0, 1, q(1)), (1, 1, q(-1)), (0, 0, q(a))]);
            let rel = diff_to_difference(&op);
            assert_eq!(rel.coeff(0), Polynomial::from_ints(&[a, 1]));
            assert_eq!(rel.coeff(-1), Polynomial::from_ints(&[1, -1]));
            let beta = |n: i64| factorial(n - 1) * factorial(a) / factorial(n + a);
            for n in 2..=15 {
                assert_eq!(rel.eval(beta, n), q(0));
            }
        }
    }

    #[test]
    fn single_term() {
        let rel = diff_to_difference(&DifferentialOperator::from_entries([(0, 1, q(1))]));
        assert_eq!(rel, ShiftedDifferenceRelation::from_terms([(-1, Polynomial::from_ints(&[1, -1]))]));
    }

    #[test]
    fn inversion() {
        assert_eq!(difference_to_diff(&diff_to_difference(&gamma_op())), Some(gamma_op()));
        assert_eq!(difference_to_diff(&ShiftedDifferenceRelation::new()), Some(DifferentialOperator::new()));
        // f(x+1) - f(x) is the image of y phi - phi
        let rel = ShiftedDifferenceRelation::from_terms([(1, Polynomial::one()), (0, Polynomial::from_ints(&[-1]))]);
        let op = difference_to_diff(&rel).unwrap();
        assert_eq!(diff_to_difference(&op), rel);
        // a constant at a negative shift needs r >= 1 and is not an image
        let bad = ShiftedDifferenceRelation::from_terms([(-1, Polynomial::one())]);
        assert_eq!(difference_to_diff(&bad), None);
    }

    #[test]
    fn theta_embedding() {
        let rel = diff_to_difference(&gamma_op());
        let (form, offset) = as_theta_form(&rel);
        assert_eq!(offset, 1);
        assert_eq!(form.to_string(), "T - x");
        let g = GridFunction::from_fn(1, 20, |n| factorial(n - 1));
        for t in 1..19 {
            assert_eq!(form.apply(&g, t).unwrap(), rel.eval(|k| factorial(k - 1), t + offset));
            assert_eq!(form.apply(&g, t).unwrap(), q(0));
        }
        let fwd = ShiftedDifferenceRelation::from_terms([(1, Polynomial::one()), (0, Polynomial::x())]);
        let (form, offset) = as_theta_form(&fwd);
        assert_eq!((form.to_string().as_str(), offset), ("T + x", 0));
    }
}
