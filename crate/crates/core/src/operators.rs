//! Linear operators on polynomials of degree at most `N`, stored by the
//! images of the monomials `x^0..x^N`.
//!
//! An image whose degree exceeds `N` cannot be stored; its column is kept
//! truncated and marked unreliable. The reliable block is the longest
//! prefix of exact columns, and every identity in this module is asserted
//! only there.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Polynomial, RationalFunction};
use crate::cli::print::{poly_to_string, ratfunc_to_string};
use crate::error::{Error, Result};
use crate::forms::DifferenceForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedOperator {
    n: usize,
    /// Image of `x^j`, truncated to degree `n`.
    cols: Vec<Polynomial>,
    exact: Vec<bool>,
    label: String,
}

fn truncate(p: &Polynomial, n: usize) -> Polynomial {
    Polynomial::new(p.coeffs().iter().take(n + 1).cloned().collect())
}

fn fits(p: &Polynomial, n: usize) -> bool {
    p.degree().is_none_or(|d| d <= n)
}

fn monomial(j: usize) -> Polynomial {
    Polynomial::monomial(BigRational::one(), j)
}

fn poly_of(r: &RationalFunction, what: &str) -> Result<Polynomial> {
    r.as_polynomial()
        .cloned()
        .ok_or_else(|| Error::Invalid(format!("{what} must be a polynomial, got {}", ratfunc_to_string(r))))
}

impl TruncatedOperator {
    /// Operator with `x^j -> image(j)`, computed exactly and truncated.
    pub fn from_images(n: usize, label: impl Into<String>, image: impl Fn(usize) -> Polynomial) -> Self {
        let mut cols = Vec::with_capacity(n + 1);
        let mut exact = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let p = image(j);
            exact.push(fits(&p, n));
            cols.push(truncate(&p, n));
        }
        Self { n, cols, exact, label: label.into() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_images(n, "I", monomial)
    }

    pub fn zero(n: usize) -> Self {
        Self::from_images(n, "0", |_| Polynomial::zero())
    }

    /// `theta phi(x) = phi(x + 1)`.
    pub fn theta(n: usize) -> Self {
        Self::from_images(n, "T", |j| monomial(j).shift_int(1))
    }

    /// `d/dx`.
    pub fn derivative(n: usize) -> Self {
        Self::from_images(n, "D", |j| monomial(j).derivative())
    }

    /// Substitution `phi(x) -> phi(mu(x))`.
    pub fn substitution(n: usize, mu: &Polynomial) -> Self {
        Self::from_images(n, format!("S[{}]", poly_to_string(mu)), |j| mu.pow(j as u32))
    }

    /// Multiplication by `g`.
    pub fn multiplication(n: usize, g: &Polynomial) -> Self {
        Self::from_images(n, format!("M[{}]", poly_to_string(g)), |j| g * &monomial(j))
    }

    /// `sum a_k(x) theta^k`; the coefficients must be polynomials.
    pub fn from_difference_form(n: usize, form: &DifferenceForm) -> Result<Self> {
        let coeffs: Vec<Polynomial> =
            form.coeffs().iter().map(|a| poly_of(a, "form coefficient")).collect::<Result<_>>()?;
        Ok(Self::from_images(n, format!("form[{}]", crate::cli::print::form_to_string(form)), |j| {
            let x = monomial(j);
            coeffs.iter().enumerate().fold(Polynomial::zero(), |acc, (k, a)| &acc + &(a * &x.shift_int(k as i64)))
        }))
    }

    /// `sum a_k(x) D^k` with polynomial coefficients `a_k`.
    pub fn from_differential(n: usize, coeffs: &[Polynomial]) -> Self {
        let label = coeffs.iter().map(poly_to_string).collect::<Vec<_>>().join(",");
        Self::from_images(n, format!("diff[{label}]"), |j| {
            let mut d = monomial(j);
            let mut acc = Polynomial::zero();
            for a in coeffs {
                acc = &acc + &(a * &d);
                d = d.derivative();
            }
            acc
        })
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Number of leading columns `x^0..x^(r-1)` whose images are exact.
    pub fn reliable(&self) -> usize {
        self.exact.iter().take_while(|&&e| e).count()
    }

    /// Largest input degree with guaranteed exact output, if any.
    pub fn reliable_degree(&self) -> Option<usize> {
        self.reliable().checked_sub(1)
    }

    /// `N - reliable degree`: how many top input degrees are excluded.
    pub fn degree_growth(&self) -> usize {
        self.n + 1 - self.reliable()
    }

    pub fn column(&self, j: usize) -> &Polynomial {
        &self.cols[j]
    }

    pub fn is_exact_column(&self, j: usize) -> bool {
        self.exact[j]
    }

    /// Dense `(N+1) x (N+1)` matrix; column `j` holds the image of `x^j`.
    pub fn matrix(&self) -> Vec<Vec<BigRational>> {
        (0..=self.n).map(|i| self.cols.iter().map(|c| c.coeff(i)).collect()).collect()
    }

    /// Exact image of `p`; requires `deg p` within the reliable block.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if let Some(d) = p.degree() {
            if d >= self.reliable() {
                return Err(Error::TruncationTooSmall(format!(
                    "degree {d} exceeds the reliable degree of {}",
                    self.label
                )));
            }
        }
        Ok(self.apply_truncated(p))
    }

    fn apply_truncated(&self, p: &Polynomial) -> Polynomial {
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Polynomial::zero(), |acc, (j, c)| &acc + &self.cols[j].scale(c))
    }

    fn check_same_n(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::Invalid(format!("truncations differ: {} vs {}", self.n, o.n)));
        }
        Ok(())
    }

    /// `self o other`.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        self.check_same_n(o)?;
        let mut cols = Vec::with_capacity(self.n + 1);
        let mut exact = Vec::with_capacity(self.n + 1);
        for j in 0..=self.n {
            let inner = &o.cols[j];
            let ok = o.exact[j]
                && inner.coeffs().iter().enumerate().all(|(i, c)| c.is_zero() || self.exact[i]);
            exact.push(ok);
            cols.push(self.apply_truncated(inner));
        }
        Ok(Self { n: self.n, cols, exact, label: format!("{}*{}", self.label, o.label) })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same_n(o)?;
        Ok(Self {
            n: self.n,
            cols: self.cols.iter().zip(&o.cols).map(|(a, b)| a + b).collect(),
            exact: self.exact.iter().zip(&o.exact).map(|(a, b)| *a && *b).collect(),
            label: format!("{}+{}", self.label, o.label),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(self.add(&o.scale(&-BigRational::one()))?.with_label(format!("{}-{}", self.label, o.label)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            n: self.n,
            cols: self.cols.iter().map(|p| p.scale(c)).collect(),
            exact: self.exact.clone(),
            label: format!("{}*{}", crate::cli::print::rational_to_string(c), self.label),
        }
    }

    /// Left multiplication by a polynomial, `M_g o self`.
    pub fn left_mul(&self, g: &Polynomial) -> Result<Self> {
        Self::multiplication(self.n, g).compose(self)
    }

    /// Equal on the common reliable block.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let r = self.reliable().min(o.reliable());
        self.n == o.n && (0..r).all(|j| self.cols[j] == o.cols[j])
    }

    /// Zero on the reliable block.
    pub fn is_zero_on_reliable(&self) -> bool {
        self.cols[..self.reliable()].iter().all(Polynomial::is_zero)
    }
}

impl fmt::Display for TruncatedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (N = {}, reliable degree {})", self.label, self.n, match self.reliable_degree() {
            Some(d) => d.to_string(),
            None => "none".into(),
        })?;
        for (j, c) in self.cols.iter().enumerate() {
            let mark = if self.exact[j] { "" } else { " (truncated)" };
            writeln!(f, "x^{j} -> {}{mark}", poly_to_string(c))?;
        }
        Ok(())
    }
}

/// `A'(phi) = A(x phi) - x A(phi)`.
pub fn functional_derivative(a: &TruncatedOperator) -> Result<TruncatedOperator> {
    let n = a.n;
    let x = Polynomial::x();
    let mut cols = Vec::with_capacity(n + 1);
    let mut exact = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let shifted = &x * &a.cols[j];
        if j < n {
            cols.push(truncate(&(&a.cols[j + 1] - &shifted), n));
            exact.push(a.exact[j + 1] && a.exact[j] && fits(&shifted, n));
        } else {
            cols.push(truncate(&-&shifted, n));
            exact.push(false);
        }
    }
    let d = TruncatedOperator { n, cols, exact, label: format!("({})'", a.label) };
    if d.reliable() == 0 {
        return Err(Error::TruncationTooSmall(format!("no reliable column left in {}", d.label)));
    }
    Ok(d)
}

/// For `A' = A`, returns `epsilon = A(1)` with `A = M_epsilon o theta`,
/// certified on every reliable monomial.
pub fn solve_a_prime_equals_a(a: &TruncatedOperator) -> Result<Polynomial> {
    let d = functional_derivative(a)?;
    if !d.agrees_with(a) {
        return Err(Error::NotASolution);
    }
    let eps = a.cols[0].clone();
    for j in 0..a.reliable() {
        if a.cols[j] != &eps * &monomial(j).shift_int(1) {
            return Err(Error::NotASolution);
        }
    }
    Ok(eps)
}

fn rf(p: &Polynomial) -> RationalFunction {
    RationalFunction::from_poly(p.clone())
}

/// Checks
/// `A(phi psi) = xi (alpha xi - 1) phi psi + (1 - alpha xi)(phi A(psi) + psi A(phi)) + alpha A(phi) A(psi)`
/// exactly for every pair.
pub fn check_multiplication_identity(
    a: &TruncatedOperator,
    alpha: &RationalFunction,
    xi: &RationalFunction,
    pairs: &[(Polynomial, Polynomial)],
) -> Result<bool> {
    let one = RationalFunction::one();
    let ax = alpha * xi;
    for (phi, psi) in pairs {
        let prod = phi * psi;
        let (a_phi, a_psi, a_prod) = (rf(&a.apply(phi)?), rf(&a.apply(psi)?), rf(&a.apply(&prod)?));
        let rhs = &(&(&(xi * &(&ax - &one)) * &rf(&prod)) + &(&(&one - &ax) * &(&(&rf(phi) * &a_psi) + &(&rf(psi) * &a_phi))))
            + &(alpha * &(&a_phi * &a_psi));
        if a_prod != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    /// `(xi1 - xi x) D + M_xi`, for `alpha = 0`.
    DerivationLike,
    /// `(1/alpha) S_mu + M_(xi - 1/alpha)`, for `alpha != 0`.
    SubstitutionLike,
}

impl CanonicalForm {
    pub fn name(self) -> &'static str {
        match self {
            CanonicalForm::DerivationLike => "derivation-like",
            CanonicalForm::SubstitutionLike => "substitution-like",
        }
    }
}

/// Parameters of an operator obeying the multiplication identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultSpec {
    pub alpha: RationalFunction,
    /// `A(1)`
    pub xi: RationalFunction,
    /// `A(x)`
    pub xi1: RationalFunction,
    /// Substitution argument, present when `alpha != 0`.
    pub mu: Option<Polynomial>,
}

impl MultSpec {
    pub fn derivation_like(xi: Polynomial, xi1: Polynomial) -> Self {
        Self { alpha: RationalFunction::zero(), xi: rf(&xi), xi1: rf(&xi1), mu: None }
    }

    /// `A(x) = mu / alpha + (xi - 1/alpha) x`.
    pub fn substitution_like(alpha: RationalFunction, xi: Polynomial, mu: Polynomial) -> Result<Self> {
        let inv = alpha.checked_inv()?;
        let xi_r = rf(&xi);
        let xi1 = &(&rf(&mu) * &inv) + &(&(&xi_r - &inv) * &RationalFunction::x());
        Ok(Self { alpha, xi: xi_r, xi1, mu: Some(mu) })
    }

    pub fn form(&self) -> CanonicalForm {
        if self.alpha.is_zero() {
            CanonicalForm::DerivationLike
        } else {
            CanonicalForm::SubstitutionLike
        }
    }

    /// The canonical operator on polynomials of degree at most `n`.
    pub fn build(&self, n: usize) -> Result<TruncatedOperator> {
        let xi = poly_of(&self.xi, "xi")?;
        match &self.mu {
            None => {
                let xi1 = poly_of(&self.xi1, "xi1")?;
                let c = &xi1 - &(&xi * &Polynomial::x());
                Ok(TruncatedOperator::from_differential(n, &[xi, c]))
            }
            Some(mu) => {
                let inv = poly_of(&self.alpha.checked_inv()?, "1/alpha")?;
                let s = TruncatedOperator::substitution(n, mu).left_mul(&inv)?;
                let m = TruncatedOperator::multiplication(n, &(&xi - &inv));
                s.add(&m)
            }
        }
    }
}

impl fmt::Display for MultSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha = {}, xi = {}, xi1 = {}",
            ratfunc_to_string(&self.alpha),
            ratfunc_to_string(&self.xi),
            ratfunc_to_string(&self.xi1)
        )?;
        if let Some(mu) = &self.mu {
            write!(f, ", mu = {}", poly_to_string(mu))?;
        }
        Ok(())
    }
}

/// Recovers `(alpha, xi)` and the canonical form of an operator obeying the
/// multiplication identity, and certifies the reconstruction on the
/// reliable block.
pub fn classify_mult_operator(a: &TruncatedOperator) -> Result<MultSpec> {
    if a.reliable() < 3 {
        return Err(Error::TruncationTooSmall("classification needs x^0, x^1, x^2 reliable".into()));
    }
    let x = RationalFunction::x();
    let xi = rf(&a.cols[0]);
    let xi1 = rf(&a.cols[1]);
    let a2 = rf(&a.cols[2]);
    // the identity on (x, x): A(x^2) + xi x^2 - 2 x xi1 = alpha (xi1 - xi x)^2
    let lhs = &(&a2 + &(&xi * &(&x * &x))) - &(&(&x * &xi1).scale(&BigRational::from_integer(2.into())));
    let base = &xi1 - &(&xi * &x);
    let alpha = if base.is_zero() {
        if !lhs.is_zero() {
            return Err(Error::NotClassifiable);
        }
        RationalFunction::zero()
    } else {
        lhs.checked_div(&(&base * &base))?
    };
    let spec = if alpha.is_zero() {
        MultSpec { alpha, xi, xi1, mu: None }
    } else {
        let mu = poly_of(&(&(&alpha * &base) + &x), "mu").map_err(|_| Error::NotClassifiable)?;
        MultSpec { alpha, xi, xi1, mu: Some(mu) }
    };
    let rebuilt = spec.build(a.n).map_err(|_| Error::NotClassifiable)?;
    if !rebuilt.agrees_with(a) {
        return Err(Error::NotClassifiable);
    }
    Ok(spec)
}

/// Rows `A_j, A_j', ..., A_j^(n-1)` for each operator.
fn derivative_columns(ops: &[TruncatedOperator]) -> Result<Vec<Vec<TruncatedOperator>>> {
    let n = ops.len();
    ops.iter()
        .map(|a| {
            let mut col = vec![a.clone()];
            for _ in 1..n {
                col.push(functional_derivative(col.last().unwrap())?);
            }
            Ok(col)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(Vec::new(), true)];
    }
    let mut out = Vec::new();
    for (p, even) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting at `pos` moves the new largest element past n-1-pos others
            let flips = (n - 1 - pos) % 2 == 1;
            out.push((q, even != flips));
        }
    }
    out
}

/// Operator determinant of `[A_j^(i)]`, expanded as
/// `sum_sigma sgn(sigma) A_(sigma(0))^(0) o A_(sigma(1))^(1) o ...`, with the
/// factors composed in ascending row order.
pub fn grevy_determinant(ops: &[TruncatedOperator]) -> Result<TruncatedOperator> {
    let first = ops.first().ok_or_else(|| Error::Invalid("empty operator family".into()))?;
    let n = first.n;
    let cols = derivative_columns(ops)?;
    let mut acc = TruncatedOperator::zero(n);
    for (perm, even) in permutations(ops.len()) {
        let mut term = TruncatedOperator::identity(n);
        for (row, &j) in perm.iter().enumerate() {
            term = term.compose(&cols[j][row])?;
        }
        acc = if even { acc.add(&term)? } else { acc.sub(&term)? };
    }
    let label = format!("grevy[{}]", ops.iter().map(|a| a.label.as_str()).collect::<Vec<_>>().join(","));
    Ok(acc.with_label(label))
}

/// Outcome for one candidate of [`nsymb_solution_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NsymbReport {
    pub candidate: Polynomial,
    /// `sum lambda_k S_a^(n-k)` vanishes on the reliable block.
    pub annihilates: bool,
    pub reliable: usize,
}

/// For each candidate `a`, checks `f(a) = sum lambda_k (a - x)^(n-k) = 0`
/// and that `sum lambda_k(x) S_a^(n-k)` is the zero operator on the
/// reliable block.
pub fn nsymb_solution_check(
    lambdas: &[RationalFunction],
    candidates: &[Polynomial],
    trunc: usize,
) -> Result<Vec<NsymbReport>> {
    let order = lambdas.len().checked_sub(1).ok_or_else(|| Error::Invalid("no coefficients".into()))?;
    // clearing denominators leaves the zero test unchanged
    let l = lambdas.iter().fold(Polynomial::one(), |acc, c| {
        let g = acc.gcd(c.den());
        &acc * &c.den().exact_div(&g).expect("gcd divides")
    });
    let lam: Vec<Polynomial> = lambdas.iter().map(|c| (c * &rf(&l)).as_polynomial().cloned().expect("cleared")).collect();
    let mut out = Vec::new();
    for a in candidates {
        let w = a - &Polynomial::x();
        let value = lam.iter().enumerate().fold(Polynomial::zero(), |acc, (k, c)| &acc + &(c * &w.pow((order - k) as u32)));
        if !value.is_zero() {
            return Err(Error::CandidateNotARoot(poly_to_string(a)));
        }
        let mut derivs = vec![TruncatedOperator::substitution(trunc, a)];
        for _ in 0..order {
            derivs.push(functional_derivative(derivs.last().unwrap())?);
        }
        let mut total = TruncatedOperator::zero(trunc);
        for (k, c) in lam.iter().enumerate() {
            total = total.add(&derivs[order - k].left_mul(c)?)?;
        }
        out.push(NsymbReport { candidate: a.clone(), annihilates: total.is_zero_on_reliable(), reliable: total.reliable() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    const N: usize = 8;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn builders() {
        let t = TruncatedOperator::theta(3);
        assert_eq!(t.column(3), &p(&[1, 3, 3, 1]));
        assert_eq!(t.reliable(), 4);
        let d = TruncatedOperator::derivative(3);
        assert_eq!(d.matrix()[1][2], q(2));
        let s = TruncatedOperator::substitution(4, &p(&[0, 0, 1]));
        assert_eq!(s.reliable_degree(), Some(2));
        assert_eq!(s.column(2), &p(&[0, 0, 0, 0, 1]));
        let m = TruncatedOperator::multiplication(4, &p(&[0, 1]));
        assert_eq!((m.reliable_degree(), m.degree_growth()), (Some(3), 1));
    }

    #[test]
    fn derivative_examples() {
        let t = TruncatedOperator::theta(N);
        assert!(functional_derivative(&t).unwrap().agrees_with(&t));
        let d = TruncatedOperator::derivative(N);
        assert!(functional_derivative(&d).unwrap().agrees_with(&TruncatedOperator::identity(N)));
        let a = p(&[1, 0, 2]);
        let s = TruncatedOperator::substitution(N, &a);
        let expect = s.left_mul(&(&a - &Polynomial::x())).unwrap();
        let ds = functional_derivative(&s).unwrap();
        assert!(ds.reliable() > 0);
        assert!(ds.agrees_with(&expect));
    }

    #[test]
    fn derivation_law() {
        let ops = [
            TruncatedOperator::theta(N),
            TruncatedOperator::derivative(N),
            TruncatedOperator::substitution(N, &p(&[1, 2])),
            TruncatedOperator::multiplication(N, &p(&[0, 1, 1])),
        ];
        for a in &ops {
            for b in &ops {
                let lhs = functional_derivative(&a.compose(b).unwrap()).unwrap();
                let da = functional_derivative(a).unwrap();
                let db = functional_derivative(b).unwrap();
                let rhs = da.compose(b).unwrap().add(&a.compose(&db).unwrap()).unwrap();
                assert!(lhs.agrees_with(&rhs), "{} {}", a.label(), b.label());
            }
        }
    }

    #[test]
    fn a_prime_equals_a() {
        assert_eq!(solve_a_prime_equals_a(&TruncatedOperator::theta(N)), Ok(Polynomial::one()));
        let a = TruncatedOperator::theta(N).left_mul(&p(&[0, 0, 1])).unwrap();
        assert_eq!(solve_a_prime_equals_a(&a), Ok(p(&[0, 0, 1])));
        assert_eq!(solve_a_prime_equals_a(&TruncatedOperator::derivative(N)), Err(Error::NotASolution));
    }

    fn pairs() -> Vec<(Polynomial, Polynomial)> {
        vec![(p(&[0, 1]), p(&[0, 1])), (p(&[1, 2]), p(&[3, 0, 1])), (p(&[0, 0, 0, 1]), p(&[-1, 1]))]
    }

    #[test]
    fn multiplication_identity() {
        let zero = RationalFunction::zero();
        let one = RationalFunction::one();
        let d = TruncatedOperator::derivative(N);
        assert!(check_multiplication_identity(&d, &zero, &zero, &pairs()).unwrap());
        let t = TruncatedOperator::theta(N);
        assert!(check_multiplication_identity(&t, &one, &one, &pairs()).unwrap());
        assert!(!check_multiplication_identity(&t, &zero, &zero, &pairs()).unwrap());
        let spec = MultSpec::derivation_like(p(&[2, 1]), p(&[0, 3]));
        let a = spec.build(N).unwrap();
        assert!(check_multiplication_identity(&a, &spec.alpha, &spec.xi, &pairs()).unwrap());
        let spec = MultSpec::substitution_like(RationalFunction::constant(qf(2, 3)), p(&[1, 1]), p(&[1, 0, 1])).unwrap();
        let a = spec.build(N).unwrap();
        assert!(check_multiplication_identity(&a, &spec.alpha, &spec.xi, &pairs()).unwrap());
    }

    #[test]
    fn classification() {
        let spec = classify_mult_operator(&TruncatedOperator::theta(N)).unwrap();
        assert_eq!(spec.form(), CanonicalForm::SubstitutionLike);
        assert_eq!((spec.alpha.clone(), spec.mu.clone()), (RationalFunction::one(), Some(p(&[1, 1]))));
        assert_eq!(spec.xi, RationalFunction::one());

        let a = TruncatedOperator::derivative(N).scale(&q(2)).add(&TruncatedOperator::multiplication(N, &p(&[0, 1]))).unwrap();
        let spec = classify_mult_operator(&a).unwrap();
        assert_eq!(spec.form(), CanonicalForm::DerivationLike);
        assert_eq!(spec.xi1, RationalFunction::from_poly(p(&[2, 0, 1])));

        let d2 = TruncatedOperator::derivative(N).compose(&TruncatedOperator::derivative(N)).unwrap();
        assert_eq!(classify_mult_operator(&d2), Err(Error::NotClassifiable));

        let spec = MultSpec::substitution_like(RationalFunction::constant(q(-3)), p(&[0, 2]), p(&[1, 1, 1])).unwrap();
        assert_eq!(classify_mult_operator(&spec.build(N).unwrap()), Ok(spec));
    }

    #[test]
    fn grevy() {
        let t = TruncatedOperator::theta(N);
        let d = TruncatedOperator::derivative(N);
        assert!(grevy_determinant(&[d.clone(), d.clone()]).unwrap().is_zero_on_reliable());
        assert!(grevy_determinant(&[t.clone(), t.scale(&q(2))]).unwrap().is_zero_on_reliable());
        let g = grevy_determinant(&[d, t]).unwrap();
        // D theta - theta applied to x gives -x
        assert_eq!(g.apply(&Polynomial::x()).unwrap(), p(&[0, -1]));
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().filter(|(_, e)| *e).count(), 3);
    }

    #[test]
    fn nsymb() {
        // (z - x - 1)(z - x - 2) in powers of w = z - x: w^2 - 3w + 2
        let lam = [RationalFunction::one(), RationalFunction::from_int(-3), RationalFunction::from_int(2)];
        let rep = nsymb_solution_check(&lam, &[p(&[1, 1]), p(&[2, 1])], N).unwrap();
        assert!(rep.iter().all(|r| r.annihilates && r.reliable > 0));
        assert_eq!(nsymb_solution_check(&lam, &[Polynomial::x()], N), Err(Error::CandidateNotARoot("x".into())));
        // first order: A' = (a - x) A
        let a = p(&[0, 0, 1]);
        let lam1 = [RationalFunction::one(), RationalFunction::from_poly(-&(&a - &Polynomial::x()))];
        assert!(nsymb_solution_check(&lam1, &[a], N).unwrap()[0].annihilates);
    }

    #[test]
    fn truncation_errors() {
        let s = TruncatedOperator::substitution(2, &p(&[0, 0, 0, 1]));
        assert_eq!(s.reliable(), 1);
        assert!(matches!(functional_derivative(&s), Err(Error::TruncationTooSmall(_))));
        assert!(matches!(s.apply(&Polynomial::x()), Err(Error::TruncationTooSmall(_))));
    }
}
