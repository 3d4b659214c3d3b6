use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::to_f64;
use crate::error::{Error, Result};

/// Dense univariate polynomial over `Q`, coefficients low to high.
///
/// The zero polynomial has no coefficients; otherwise the last entry is
/// nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn monomial(c: BigRational, n: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = c;
        Self { coeffs }
    }

    /// `x - r`
    pub fn linear_root(r: &BigRational) -> Self {
        Self::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `p(x + k)`, by binomial expansion of each power.
    pub fn shift(&self, k: &BigRational) -> Self {
        let n = self.coeffs.len();
        if n == 0 || k.is_zero() {
            return self.clone();
        }
        let mut powers = Vec::with_capacity(n);
        let mut p = BigRational::one();
        for _ in 0..n {
            powers.push(p.clone());
            p *= k;
        }
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // binomial(i, j) built incrementally
            let mut binom = BigInt::one();
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                if j > 0 {
                    binom = binom * BigInt::from(i - j + 1) / BigInt::from(j);
                }
                *slot += c * &powers[i - j] * BigRational::from_integer(binom.clone());
            }
        }
        Self::new(out)
    }

    pub fn shift_int(&self, k: i64) -> Self {
        self.shift(&BigRational::from_integer(k.into()))
    }

    /// `p(q(x))`
    pub fn compose(&self, q: &Polynomial) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Polynomial) -> Option<(Polynomial, Polynomial)> {
        let dd = d.degree()?;
        let lc_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Polynomial) -> (Polynomial, Polynomial, Polynomial) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&qt * &s1);
            let t = &t0 - &(&qt * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Integer coefficients after clearing denominators.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = BigRational::from_integer(self.denominator_lcm());
        self.coeffs.iter().map(|c| (c * &l).to_integer()).collect()
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let l = self.denominator_lcm();
        let g = self
            .integer_coeffs()
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        BigRational::new(g, l)
    }

    /// Integer-primitive associate with positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Self::zero();
        }
        let mut p = self.scale(&self.content().recip());
        if p.leading().is_negative() {
            p = -p;
        }
        p
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect()
    }
}

/// Squarefree decomposition (Yun): monic factors `s_i` with multiplicity
/// `i`, so that `p = lc * prod s_i^i`. Factors equal to 1 are omitted.
pub fn squarefree_decomposition(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let mut c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    use num_traits::ToPrimitive;
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut divs = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            divs.push(BigInt::from(d));
            if d * d != n {
                divs.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(divs)
}

/// Rational roots with multiplicities, plus the cofactor that has no
/// rational roots (up to a constant).
///
/// Candidates come from the rational root theorem; when the constant or
/// leading coefficient is too large to enumerate divisors, numerically
/// located real roots are rounded against each admissible denominator and
/// confirmed by exact evaluation.
pub fn rational_roots(p: &Polynomial) -> Result<(Vec<(BigRational, usize)>, Polynomial)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rest = p.monic();
    let mut roots: Vec<(BigRational, usize)> = Vec::new();
    let mut take = |rest: &mut Polynomial, r: BigRational| {
        let lin = Polynomial::linear_root(&r);
        let mut m = 0;
        while let Some(q) = rest.exact_div(&lin) {
            if rest.is_constant() {
                break;
            }
            *rest = q;
            m += 1;
        }
        if m > 0 {
            roots.push((r, m));
        }
    };
    // zero root
    if rest.coeff(0).is_zero() && !rest.is_zero() {
        take(&mut rest, BigRational::zero());
    }
    if rest.degree().unwrap_or(0) == 0 {
        return Ok((roots, rest));
    }
    let ints = rest.integer_coeffs();
    let lead = ints.last().cloned().unwrap();
    let konst = ints[0].clone();
    match (small_divisors(&konst), small_divisors(&lead)) {
        (Some(nums), Some(dens)) => {
            let mut cands = Vec::new();
            for a in &nums {
                for b in &dens {
                    let r = BigRational::new(a.clone(), b.clone());
                    cands.push(r.clone());
                    cands.push(-r);
                }
            }
            cands.sort();
            cands.dedup();
            for r in cands {
                if rest.degree().unwrap_or(0) == 0 {
                    break;
                }
                if rest.eval(&r).is_zero() {
                    take(&mut rest, r);
                }
            }
        }
        _ => {
            let dens = small_divisors(&lead).unwrap_or_else(|| vec![BigInt::one()]);
            let approx = crate::numeric::poly_roots(&rest.to_complex_coeffs());
            for z in approx {
                if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                    continue;
                }
                for b in &dens {
                    let bf = to_f64(&BigRational::from_integer(b.clone()));
                    let a = (z.re * bf).round();
                    if !a.is_finite() {
                        continue;
                    }
                    let r = BigRational::new(BigInt::from(a as i64), b.clone());
                    if rest.degree().unwrap_or(0) > 0 && rest.eval(&r).is_zero() {
                        take(&mut rest, r);
                    }
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok((roots, rest))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Polynomial, Add::add, Sub::sub, Mul::mul);

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::cli::print::poly_to_string(self))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::cli::print::poly_to_string(self))
    }
}
