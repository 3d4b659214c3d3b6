//! Linear ODEs satisfied by the roots of an algebraic equation `f(x, y) = 0`.
//!
//! With `A f + B f_y = phi(x)`, every derivative of a root reduces to
//! `y^(k) = P_k(x, y) / phi^k` with `P_k` of degree below `m = deg_y f`.
//! The rows `P_k / phi^k`, viewed as vectors over `y^0..y^(m-1)`, must be
//! linearly dependent once there are more than `m` of them; the first
//! dependency is the annihilating equation.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

use crate::algebra::{bezout_in_y, nullspace, BivariatePolynomial, Polynomial, RationalFunction};
use crate::cli::print::ratfunc_to_string;
use crate::error::{Error, Result};
use crate::numeric::poly_roots;

/// Reduced derivatives of a root of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeTable {
    pub m: usize,
    pub phi: RationalFunction,
    /// `P_k`, reduced modulo `f`.
    pub numerators: Vec<BivariatePolynomial>,
    /// `rows[k][j]` is the coefficient of `y^j` in `y^(k)`.
    pub rows: Vec<Vec<RationalFunction>>,
}

impl DerivativeTable {
    /// `y^(k)` as a polynomial in `y` of degree below `m`.
    pub fn row_poly(&self, k: usize) -> BivariatePolynomial {
        BivariatePolynomial::new(self.rows[k].clone())
    }

    /// `y^(k)` at a complex point `x` on the branch with value `y`.
    pub fn eval_row(&self, k: usize, x: Complex64, y: Complex64) -> Complex64 {
        self.rows[k]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c.eval_complex(x))
    }
}

fn y_degree(f: &BivariatePolynomial) -> Result<usize> {
    match f.degree_y() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::PreconditionViolated("f must have positive degree in y".into())),
        Some(m) => Ok(m),
    }
}

fn to_row(p: &BivariatePolynomial, m: usize) -> Vec<RationalFunction> {
    (0..m).map(|j| p.coeff(j)).collect()
}

/// Rows `0..=k_max` of the reduced derivative table.
///
/// `P_1 = -B f_x mod f`, then
/// `P_(k+1) = phi d_x P_k + d_y P_k P_1 - k phi' P_k mod f`.
pub fn derivative_table(f: &BivariatePolynomial, k_max: usize) -> Result<DerivativeTable> {
    let m = y_degree(f)?;
    if k_max < m {
        return Err(Error::PreconditionViolated(format!("table length {k_max} is below deg_y f = {m}")));
    }
    let bz = bezout_in_y(f)?;
    let phi = bz.phi;
    let dphi = BivariatePolynomial::constant(phi.derivative());
    let phi_b = BivariatePolynomial::constant(phi.clone());
    let p0 = BivariatePolynomial::y().rem(f)?;
    let p1 = (-&(&bz.b * &f.diff_x())).rem(f)?;
    let mut numerators = vec![p0, p1.clone()];
    for k in 1..k_max {
        let pk = &numerators[k];
        let kq = RationalFunction::from_int(k as i64);
        let next = &(&(&phi_b * &pk.diff_x()) + &(&pk.diff_y() * &p1)) - &(&dphi * pk).scale(&kq);
        numerators.push(next.rem(f)?);
    }
    let mut rows = Vec::with_capacity(numerators.len());
    for (k, p) in numerators.iter().enumerate() {
        let inv = phi.pow(k as u32).checked_inv()?;
        rows.push(to_row(&p.scale(&inv), m));
    }
    Ok(DerivativeTable { m, phi, numerators, rows })
}

/// `sum_k c_k y^(k) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearODE {
    coeffs: Vec<RationalFunction>,
}

impl LinearODE {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// Canonical associate: polynomial coefficients with no common factor in
    /// `x`, coprime integer coefficients overall, and a positive leading
    /// coefficient of `c_q`.
    pub fn normalized(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let l = self.coeffs.iter().fold(Polynomial::one(), |acc, c| {
            let g = acc.gcd(c.den());
            &acc * &c.den().exact_div(&g).expect("gcd divides")
        });
        let lr = RationalFunction::from_poly(l);
        let polys: Vec<Polynomial> = self
            .coeffs
            .iter()
            .map(|c| (c * &lr).as_polynomial().cloned().expect("denominators cleared"))
            .collect();
        let g = polys.iter().fold(Polynomial::zero(), |acc, p| acc.gcd(p));
        let polys: Vec<Polynomial> = polys.iter().map(|p| p.exact_div(&g).expect("gcd divides")).collect();
        let all: Vec<BigRational> = polys.iter().flat_map(|p| p.coeffs().iter().cloned()).collect();
        let mut content = Polynomial::new(all).content();
        if polys.last().expect("nonempty").leading().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        Self::new(polys.iter().map(|p| RationalFunction::from_poly(p.scale(&inv))).collect())
    }

    /// The equation obtained by differentiating once.
    pub fn derivative(&self) -> Self {
        let mut out = vec![RationalFunction::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] = &out[k] + &c.derivative();
            out[k + 1] = &out[k + 1] + c;
        }
        Self::new(out)
    }

    /// `sum c_k(x) y_k` for given derivative values `y_k`, together with
    /// `sum |c_k(x) y_k|`.
    fn eval_terms(&self, x: Complex64, derivs: &[Complex64]) -> (Complex64, f64) {
        self.coeffs.iter().zip(derivs).fold((Complex64::new(0.0, 0.0), 0.0), |(s, a), (c, d)| {
            let t = c.eval_complex(x) * d;
            (s + t, a + t.norm())
        })
    }
}

impl fmt::Display for LinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let d = match k {
                    0 => "y".to_string(),
                    k => format!("y^({k})"),
                };
                format!("({})*{d}", ratfunc_to_string(c))
            })
            .collect();
        write!(f, "{} = 0", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

/// Differentiates `ode` until it has order `m`, then normalizes.
pub fn lift_to_order(ode: &LinearODE, m: usize) -> LinearODE {
    let mut out = ode.clone();
    while out.order().is_some_and(|q| q < m) {
        out = out.derivative();
    }
    out.normalized()
}

/// Minimal-order homogeneous linear ODE annihilating every root of `f`,
/// in normalized form.
pub fn tannery_ode(f: &BivariatePolynomial) -> Result<LinearODE> {
    let m = y_degree(f)?;
    let table = derivative_table(f, m)?;
    ode_from_table(&table)
}

/// First left dependency among the rows of `table`.
pub fn ode_from_table(table: &DerivativeTable) -> Result<LinearODE> {
    for k in 0..table.rows.len() {
        let mat: Vec<Vec<RationalFunction>> =
            (0..table.m).map(|j| (0..=k).map(|i| table.rows[i][j].clone()).collect()).collect();
        if let Some(v) = nullspace(&mat, k + 1).into_iter().next() {
            return Ok(LinearODE::new(v).normalized());
        }
    }
    Err(Error::PreconditionViolated("table too short for a dependency".into()))
}

/// True iff `c_(q-k) / c_q * phi^k` is a polynomial for `k = 1..=q`.
pub fn check_tannery_shape(ode: &LinearODE, phi: &RationalFunction) -> bool {
    let Some(q) = ode.order() else {
        return false;
    };
    let lead = ode.leading();
    (1..=q).all(|k| {
        let c = &ode.coeff(q - k) * &phi.pow(k as u32);
        c.checked_div(&lead).is_ok_and(|r| r.is_polynomial())
    })
}

/// Maximum relative residual `|sum c_k y^(k)| / sum |c_k y^(k)|` over all
/// sample points and all roots of `f(x, .) = 0`. Derivatives come from the
/// reduced derivative table.
pub fn verify_ode_numeric(f: &BivariatePolynomial, ode: &LinearODE, xs: &[Complex64]) -> Result<f64> {
    let m = y_degree(f)?;
    let q = ode.order().ok_or(Error::ZeroPolynomial)?;
    let table = derivative_table(f, q.max(m))?;
    let mut singular = Polynomial::one();
    let mut include = |p: &Polynomial| {
        let g = singular.gcd(p);
        singular = &singular * &p.exact_div(&g).expect("gcd divides");
    };
    include(table.phi.num());
    include(f.leading().num());
    for c in f.coeffs().iter().chain(ode.coeffs()) {
        include(c.den());
    }
    for c in table.rows.iter().flatten() {
        include(c.den());
    }
    let singular = singular.exact_div(&singular.gcd(&singular.derivative())).expect("gcd divides");
    let sing_pts = poly_roots(&singular.to_complex_coeffs());
    let mut worst = 0.0f64;
    for &x in xs {
        if let Some(s) = sing_pts.iter().find(|s| (x - **s).norm() <= 1e-8 * (1.0 + s.norm())) {
            return Err(Error::SampleAtSingularity(format!("{x} (near {s})")));
        }
        for y in poly_roots(&f.y_coeffs_at(x)) {
            let derivs: Vec<Complex64> = (0..=q).map(|k| table.eval_row(k, x, y)).collect();
            let (sum, scale) = ode.eval_terms(x, &derivs);
            if scale > 0.0 {
                worst = worst.max(sum.norm() / scale);
            }
        }
    }
    Ok(worst)
}

/// Elimination for `f = a y^2 + 2 b y + c`: with `phi = ac - b^2`,
/// `y' = (alpha y + beta) / (a phi)` and
/// `y'' = (gamma y + delta) / (a^2 phi^2)`, and removing the terms free of
/// `y` gives
/// `beta y'' - delta / (a phi) y' + (alpha delta - beta gamma) / (a^2 phi^2) y = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticElimination {
    pub phi: RationalFunction,
    pub alpha: RationalFunction,
    pub beta: RationalFunction,
    pub gamma: RationalFunction,
    pub delta: RationalFunction,
    /// Coefficients of `y, y', y''` exactly as eliminated.
    pub ode: LinearODE,
}

pub fn quadratic_elimination(
    a: &RationalFunction,
    b: &RationalFunction,
    c: &RationalFunction,
) -> Result<QuadraticElimination> {
    let two = RationalFunction::from_int(2);
    let f = BivariatePolynomial::new(vec![c.clone(), b * &two, a.clone()]);
    if f.degree_y() != Some(2) {
        return Err(Error::PreconditionViolated("a must be nonzero".into()));
    }
    let phi = &(a * c) - &(b * b);
    if phi.is_zero() {
        return Err(Error::NotSquarefree);
    }
    // B = -(a y + b) / 2, so y' = -B f_x / phi
    let half = BigRational::new(1.into(), 2.into());
    let bw = BivariatePolynomial::new(vec![b.scale(&half), a.scale(&half)]);
    let num = (&bw * &f.diff_x()).rem(&f)?;
    let a_phi = a * &phi;
    let alpha = &num.coeff(1) * a;
    let beta = &num.coeff(0) * a;
    let d_aphi = a_phi.derivative();
    let gamma = &(&(&alpha.derivative() * &a_phi) + &(&alpha * &alpha)) - &(&alpha * &d_aphi);
    let delta = &(&(&beta.derivative() * &a_phi) + &(&alpha * &beta)) - &(&beta * &d_aphi);
    let c0 = (&(&alpha * &delta) - &(&beta * &gamma)).checked_div(&(&a_phi * &a_phi))?;
    let c1 = -delta.checked_div(&a_phi)?;
    let ode = LinearODE::new(vec![c0, c1, beta.clone()]);
    Ok(QuadraticElimination { phi, alpha, beta, gamma, delta, ode })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::from_ints(c))
    }

    fn biv(cs: &[&[i64]]) -> BivariatePolynomial {
        BivariatePolynomial::new(cs.iter().map(|c| rf(c)).collect())
    }

    fn strs(ode: &LinearODE) -> Vec<String> {
        ode.coeffs().iter().map(ratfunc_to_string).collect()
    }

    #[test]
    fn sqrt_table() {
        let f = biv(&[&[0, -1], &[], &[1]]);
        let t = derivative_table(&f, 3).unwrap();
        assert_eq!(t.phi, rf(&[0, 1]));
        let inv2x = RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[0, 2])).unwrap();
        assert_eq!(t.rows[1], vec![RationalFunction::zero(), inv2x]);
        let m4x2 = RationalFunction::new(Polynomial::from_ints(&[-1]), Polynomial::from_ints(&[0, 0, 4])).unwrap();
        assert_eq!(t.rows[2], vec![RationalFunction::zero(), m4x2]);
    }

    #[test]
    fn table_is_a_derivative() {
        for f in [biv(&[&[1], &[0, 2], &[1]]), biv(&[&[0, 1], &[1, 0, 1], &[0], &[2, 1]]), biv(&[&[3, -1], &[1]])] {
            let t = derivative_table(&f, 4).unwrap();
            let y1 = t.row_poly(1);
            for k in 0..4 {
                let rk = t.row_poly(k);
                let d = (&rk.diff_x() + &(&rk.diff_y() * &y1)).rem(&f).unwrap();
                assert_eq!(d, t.row_poly(k + 1), "row {k}");
            }
        }
    }

    #[test]
    fn explicit_function() {
        // y - x^3
        let f = biv(&[&[0, 0, 0, -1], &[1]]);
        let t = derivative_table(&f, 4).unwrap();
        let expect = [rf(&[0, 0, 0, 1]), rf(&[0, 0, 3]), rf(&[0, 6]), rf(&[6]), rf(&[])];
        for (row, e) in t.rows.iter().zip(expect) {
            assert_eq!(row, &vec![e]);
        }
        let ode = tannery_ode(&f).unwrap();
        assert_eq!(strs(&ode), ["-3", "x"]);
    }

    #[test]
    fn sqrt_ode() {
        let f = biv(&[&[0, -1], &[], &[1]]);
        let ode = tannery_ode(&f).unwrap();
        assert_eq!(strs(&ode), ["-1", "2*x"]);
        let lifted = lift_to_order(&ode, 2);
        assert_eq!(strs(&lifted), ["0", "1", "2*x"]);
        assert!(check_tannery_shape(&ode, &rf(&[0, 1])));
        let xs = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0), Complex64::new(-3.0, 0.0)];
        assert!(verify_ode_numeric(&f, &ode, &xs).unwrap() < 1e-10);
        let bad = LinearODE::new(vec![rf(&[-1]), rf(&[0, 3])]);
        assert!(verify_ode_numeric(&f, &bad, &xs).unwrap() > 1e-3);
        assert!(matches!(
            verify_ode_numeric(&f, &ode, &[Complex64::new(0.0, 0.0)]),
            Err(Error::SampleAtSingularity(_))
        ));
    }

    #[test]
    fn scale_invariance() {
        let f = biv(&[&[1], &[0, 2], &[1]]);
        let g = f.scale(&RationalFunction::constant(qf(-7, 3)));
        assert_eq!(tannery_ode(&f).unwrap(), tannery_ode(&g).unwrap());
    }

    #[test]
    fn quadratic_example() {
        // y^2 + 2 x y + 1: roots -x +- sqrt(x^2 - 1)
        let f = biv(&[&[1], &[0, 2], &[1]]);
        let ode = tannery_ode(&f).unwrap();
        assert_eq!(ode.order(), Some(2));
        assert_eq!(strs(&ode), ["-1", "x", "x^2-1"]);
        let xs = [Complex64::new(0.3, 0.2), Complex64::new(2.0, -1.0), Complex64::new(-4.0, 0.5)];
        assert!(verify_ode_numeric(&f, &ode, &xs).unwrap() < 1e-9);
        let el = quadratic_elimination(&rf(&[1]), &rf(&[0, 1]), &rf(&[1])).unwrap();
        assert_eq!(el.phi, rf(&[1, 0, -1]));
        assert_eq!((el.alpha.clone(), el.beta.clone()), (rf(&[0, -1]), rf(&[-1])));
        assert_eq!(el.ode.normalized(), ode);
    }

    #[test]
    fn quadratic_elimination_generic() {
        // a = x + 1, b = x, c = x: the y'' coefficient depends on x
        let (a, b, c) = (rf(&[1, 1]), rf(&[0, 1]), rf(&[0, 1]));
        let el = quadratic_elimination(&a, &b, &c).unwrap();
        assert!(el.beta.as_constant().is_none());
        let f = BivariatePolynomial::new(vec![c.clone(), b.scale(&q(2)), a.clone()]);
        assert_eq!(el.ode.normalized(), tannery_ode(&f).unwrap());
    }

    #[test]
    fn shape_constructed() {
        let phi = rf(&[-1, 0, 1]);
        let ok = LinearODE::new(vec![
            RationalFunction::new(Polynomial::from_ints(&[2, 1]), phi.num().pow(2)).unwrap(),
            RationalFunction::new(Polynomial::from_ints(&[0, 3]), phi.num().clone()).unwrap(),
            rf(&[1]),
        ]);
        assert!(check_tannery_shape(&ok, &phi));
        let bad = LinearODE::new(vec![rf(&[1]), RationalFunction::new(rf(&[1]).num().clone(), phi.num().pow(2)).unwrap(), rf(&[1])]);
        assert!(!check_tannery_shape(&bad, &phi));
    }

    #[test]
    fn rejects_repeated_roots() {
        let f = biv(&[&[0, 0, 1], &[0, -2], &[1]]);
        assert_eq!(tannery_ode(&f), Err(Error::NotSquarefree));
        assert!(derivative_table(&biv(&[&[1]]), 2).is_err());
        assert!(derivative_table(&biv(&[&[0, -1], &[], &[1]]), 1).is_err());
    }

    #[test]
    fn order_bound() {
        let cubic = biv(&[&[0, 1], &[1, 0, 1], &[0], &[2, 1]]);
        let ode = tannery_ode(&cubic).unwrap();
        assert!(ode.order().unwrap() <= 3);
        assert!(ode.leading().num().leading() .is_positive());
    }
}
