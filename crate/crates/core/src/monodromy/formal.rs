use std::fmt;

use num_rational::BigRational;

use super::scalar::{Exponent, Scalar, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};

/// One term `coeff * x^exponent * t^log_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exponent: Exponent,
    pub log_power: usize,
    pub coeff: Scalar,
}

/// Finite sum of terms `c * x^rho * t^k` with `t = log(x - x1) / (2 pi i)`.
/// Terms with equal `(rho, k)` are merged and exact zeros dropped.
#[derive(Clone, Debug, Default)]
pub struct FormalLocalSolution {
    terms: Vec<Term>,
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

impl FormalLocalSolution {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Exponent::zero(), 0, Scalar::one())
    }

    pub fn monomial(exponent: Exponent, log_power: usize, coeff: Scalar) -> Self {
        let mut s = Self::zero();
        s.push(Term { exponent, log_power, coeff });
        s
    }

    /// `x^rho` for rational `rho`.
    pub fn x_pow(rho: BigRational) -> Self {
        Self::monomial(Exponent::rational(rho), 0, Scalar::one())
    }

    /// The logarithmic variable `t`.
    pub fn t() -> Self {
        Self::monomial(Exponent::zero(), 1, Scalar::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut s = Self::zero();
        for t in terms {
            s.push(t);
        }
        s
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn push(&mut self, term: Term) {
        if let Some(slot) = self
            .terms
            .iter_mut()
            .find(|t| t.log_power == term.log_power && t.exponent.approx_eq(&term.exponent, DEFAULT_TOLERANCE))
        {
            slot.coeff = slot.coeff.add(&term.coeff);
        } else {
            self.terms.push(term);
        }
        self.terms.retain(|t| !t.coeff.is_zero());
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for t in &o.terms {
            s.push(t.clone());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term { coeff: t.coeff.mul(c), ..t.clone() }))
    }

    /// Product in the commutative formal ring: exponents add, log powers
    /// add, coefficients multiply.
    pub fn mul(&self, o: &Self) -> Self {
        let mut s = Self::zero();
        for a in &self.terms {
            for b in &o.terms {
                s.push(Term {
                    exponent: a.exponent.add(&b.exponent),
                    log_power: a.log_power + b.log_power,
                    coeff: a.coeff.mul(&b.coeff),
                });
            }
        }
        s
    }

    /// Division by a monomial `c * x^rho` (no logarithm).
    pub fn div_monomial(&self, v: &Self) -> Result<Self> {
        let [m] = v.terms.as_slice() else {
            return Err(Error::Invalid("divisor is not a monomial".into()));
        };
        if m.log_power != 0 {
            return Err(Error::Invalid("divisor contains a logarithm".into()));
        }
        let inv = m.coeff.inv().ok_or(Error::DivisionByZero)?;
        Ok(Self::from_terms(self.terms.iter().map(|t| Term {
            exponent: t.exponent.add(&m.exponent.neg()),
            log_power: t.log_power,
            coeff: t.coeff.mul(&inv),
        })))
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.is_negligible(tol))
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.sub(o).is_zero(tol)
    }

    fn theta_term<'a>(t: &'a Term, lambda: &Scalar) -> impl Iterator<Item = Term> + 'a {
        let c = t.coeff.mul(lambda);
        (0..=t.log_power).map(move |i| Term {
            exponent: t.exponent.clone(),
            log_power: i,
            coeff: c.mul(&Scalar::int(binomial(t.log_power, i))),
        })
    }

    /// `theta(x^rho t^k) = lambda x^rho (t + 1)^k`, requiring every term's
    /// multiplier `exp(2 pi i rho)` to equal `lambda`.
    pub fn theta_on_local(&self, lambda: &Scalar) -> Result<Self> {
        for t in &self.terms {
            if !t.exponent.multiplier().approx_eq(lambda, DEFAULT_TOLERANCE) {
                return Err(Error::InconsistentMultiplier);
            }
        }
        Ok(Self::from_terms(self.terms.iter().flat_map(|t| Self::theta_term(t, lambda))))
    }

    /// Monodromy action with each term's own multiplier.
    pub fn theta(&self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|t| {
            let lambda = t.exponent.multiplier();
            Self::theta_term(t, &lambda).collect::<Vec<_>>()
        }))
    }

    pub fn theta_pow(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.theta())
    }
}

impl fmt::Display for FormalLocalSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut s = format!("({})", t.coeff);
                if !t.exponent.is_zero() {
                    s.push_str(&format!("*x^({})", t.exponent));
                }
                match t.log_power {
                    0 => {}
                    1 => s.push_str("*t"),
                    k => s.push_str(&format!("*t^{k}")),
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `det[theta^i y_j]` expanded in the formal ring, by cofactor expansion
/// along the first row. With `lambdas`, `theta` on `y_j` uses
/// `lambdas[j]` and checks consistency; otherwise each term carries its
/// own multiplier.
pub fn theta_determinant(sols: &[FormalLocalSolution], lambdas: Option<&[Scalar]>) -> Result<FormalLocalSolution> {
    let n = sols.len();
    if let Some(l) = lambdas {
        if l.len() != n {
            return Err(Error::Invalid("one multiplier per solution is required".into()));
        }
    }
    let mut cols: Vec<Vec<FormalLocalSolution>> = Vec::with_capacity(n);
    for (j, y) in sols.iter().enumerate() {
        let mut col = vec![y.clone()];
        for _ in 1..n {
            let prev = col.last().unwrap();
            col.push(match lambdas {
                Some(l) => prev.theta_on_local(&l[j])?,
                None => prev.theta(),
            });
        }
        cols.push(col);
    }
    let entry = |i: usize, j: usize| &cols[j][i];
    fn expand<'a>(
        entry: &dyn Fn(usize, usize) -> &'a FormalLocalSolution,
        row: usize,
        cols: &mut Vec<usize>,
    ) -> FormalLocalSolution {
        if cols.is_empty() {
            return FormalLocalSolution::one();
        }
        let mut acc = FormalLocalSolution::zero();
        for idx in 0..cols.len() {
            let j = cols.remove(idx);
            let minor = expand(entry, row + 1, cols);
            cols.insert(idx, j);
            let term = entry(row, j).mul(&minor);
            acc = if idx % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
    Ok(expand(&entry, 0, &mut (0..n).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};
    use num_complex::Complex64;

    fn w3() -> Scalar {
        Exponent::rational(qf(1, 3)).multiplier()
    }

    #[test]
    fn theta_examples() {
        let s = FormalLocalSolution::x_pow(qf(1, 2));
        let r = s.theta_on_local(&Scalar::int(-1)).unwrap();
        assert!(r.approx_eq(&s.scale(&Scalar::int(-1)), 0.0));
        assert!(r.terms()[0].coeff.is_exact());

        let t = FormalLocalSolution::t();
        let r = t.theta_on_local(&Scalar::one()).unwrap();
        assert!(r.approx_eq(&t.add(&FormalLocalSolution::one()), 0.0));

        let s = FormalLocalSolution::x_pow(qf(1, 3)).mul(&t);
        let r = s.theta_on_local(&w3()).unwrap();
        let expect = s.scale(&w3()).add(&FormalLocalSolution::x_pow(qf(1, 3)).scale(&w3()));
        assert!(r.approx_eq(&expect, 1e-14));

        assert_eq!(t.theta_on_local(&Scalar::int(-1)).unwrap_err(), Error::InconsistentMultiplier);
    }

    #[test]
    fn theta_is_multiplicative() {
        let u = FormalLocalSolution::x_pow(qf(1, 3)).mul(&FormalLocalSolution::t()).add(&FormalLocalSolution::x_pow(q(2)));
        let v = FormalLocalSolution::x_pow(qf(1, 4)).scale(&Scalar::Numeric(Complex64::new(2.0, 1.0)));
        assert!(u.mul(&v).theta().approx_eq(&u.theta().mul(&v.theta()), 1e-12));
        let lhs = u.div_monomial(&v).unwrap().theta();
        let rhs = u.theta().div_monomial(&v.theta()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn determinant_examples() {
        let h = FormalLocalSolution::x_pow(qf(1, 2));
        let d = theta_determinant(&[h.clone(), h.scale(&Scalar::int(3))], None).unwrap();
        assert!(d.is_exact_zero());

        let d = theta_determinant(&[FormalLocalSolution::one(), FormalLocalSolution::t()], None).unwrap();
        assert!(d.approx_eq(&FormalLocalSolution::one(), 0.0));

        let a = FormalLocalSolution::x_pow(qf(1, 2));
        let b = FormalLocalSolution::x_pow(qf(1, 3));
        let l = [Scalar::int(-1), w3()];
        let d = theta_determinant(&[a, b], Some(&l)).unwrap();
        let expect = FormalLocalSolution::x_pow(qf(5, 6)).scale(&l[1].sub(&l[0]));
        assert!(d.approx_eq(&expect, 1e-14));
        assert!(d.max_abs_coeff() > 1.0);
    }
}
