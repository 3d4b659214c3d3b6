//! Canonical text forms. Every string printed here parses back to the same
//! value.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{BivariatePolynomial, Polynomial, RationalFunction};
use crate::forms::DifferenceForm;

pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Polynomial in `var`, high degree first, no spaces: `x^2-3*x+2`.
pub fn poly_in(p: &Polynomial, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&rational_to_string(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&rational_to_string(&a));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

pub fn poly_to_string(p: &Polynomial) -> String {
    poly_in(p, "x")
}

pub fn ratfunc_in(r: &RationalFunction, var: &str) -> String {
    if r.den().is_one() {
        return poly_in(r.num(), var);
    }
    let wrap = |p: &Polynomial| {
        let s = poly_in(p, var);
        if p.term_count() > 1 || (p.degree() > Some(0) && !p.leading().is_one()) {
            format!("({s})")
        } else {
            s
        }
    };
    let num = if r.num().term_count() > 1 { format!("({})", poly_in(r.num(), var)) } else { poly_in(r.num(), var) };
    format!("{}/{}", num, wrap(r.den()))
}

/// `x/(x-1)`, `(x+1)/(x^2+1)`, `1/x`.
pub fn ratfunc_to_string(r: &RationalFunction) -> String {
    ratfunc_in(r, "x")
}

fn is_negative(r: &RationalFunction) -> bool {
    r.num().leading().is_negative()
}

/// True when `r` prints as a single signed monomial with no operator of
/// lower precedence than `*`.
fn is_atomic(r: &RationalFunction) -> bool {
    r.den().is_one() && r.num().term_count() <= 1
}

/// Sum of `coeff * sym^k` terms separated by ` + ` / ` - `, highest power
/// first. Non-monomial coefficients are parenthesized.
fn operator_poly(coeffs: &[RationalFunction], sym: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = is_negative(c);
        let a = if neg { -c } else { c.clone() };
        let first = out.is_empty();
        match (first, neg) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        let power = match k {
            0 => String::new(),
            1 => sym.to_string(),
            _ => format!("{sym}^{k}"),
        };
        if power.is_empty() {
            let s = ratfunc_to_string(&a);
            if neg && !is_atomic(&a) {
                out.push_str(&format!("({s})"));
            } else {
                out.push_str(&s);
            }
        } else if a.is_one() {
            out.push_str(&power);
        } else if is_atomic(&a) {
            out.push_str(&format!("{}*{}", ratfunc_to_string(&a), power));
        } else {
            out.push_str(&format!("({})*{}", ratfunc_to_string(&a), power));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// `T^2 - (2*x+1)*T + x^2`.
pub fn form_to_string(f: &DifferenceForm) -> String {
    operator_poly(f.coeffs(), "T")
}

/// `y^2 + 2*x*y + 1`.
pub fn bivariate_to_string(f: &BivariatePolynomial) -> String {
    operator_poly(f.coeffs(), "y")
}

/// Decimal complex number: `1.5`, `-0.5+0.8660254037844386*i`.
pub fn complex_to_string(z: Complex64) -> String {
    let clean = |v: f64| if v == 0.0 { 0.0 } else { v };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}*i")
    } else if im < 0.0 {
        format!("{re}-{}*i", -im)
    } else {
        format!("{re}+{im}*i")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    #[test]
    fn polynomials() {
        assert_eq!(poly_to_string(&Polynomial::from_ints(&[2, -3, 1])), "x^2-3*x+2");
        assert_eq!(poly_to_string(&Polynomial::monomial(qf(3, 2), 1)), "3/2*x");
        assert_eq!(poly_to_string(&Polynomial::from_ints(&[1, 0, -1])), "-x^2+1");
        assert_eq!(poly_to_string(&Polynomial::zero()), "0");
    }

    #[test]
    fn rational_functions() {
        let r = RationalFunction::new(Polynomial::x(), Polynomial::from_ints(&[-1, 1])).unwrap();
        assert_eq!(ratfunc_to_string(&r), "x/(x-1)");
        let r = RationalFunction::new(Polynomial::one(), Polynomial::x()).unwrap();
        assert_eq!(ratfunc_to_string(&r), "1/x");
        assert_eq!(ratfunc_to_string(&RationalFunction::constant(qf(-1, 2))), "-1/2");
    }

    #[test]
    fn forms() {
        let x = RationalFunction::x();
        let f = DifferenceForm::new(vec![
            RationalFunction::from_poly(Polynomial::from_ints(&[0, 0, 1])),
            RationalFunction::from_poly(Polynomial::from_ints(&[-1, -2])),
            RationalFunction::one(),
        ]);
        assert_eq!(form_to_string(&f), "T^2 - (2*x+1)*T + x^2");
        let g = DifferenceForm::new(vec![-&x, RationalFunction::constant(q(3))]);
        assert_eq!(form_to_string(&g), "3*T - x");
        let h = DifferenceForm::new(vec![RationalFunction::from_poly(Polynomial::from_ints(&[-1, 0, -1]))]);
        assert_eq!(form_to_string(&h), "-(x^2+1)");
    }
}
