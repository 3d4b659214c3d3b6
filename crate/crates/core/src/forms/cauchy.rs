//! Constant-coefficient recurrences: characteristic roots, the symbolic
//! solution basis `t^j r^t`, and partial fractions of `1 / F`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{rational_roots, squarefree_decomposition, to_f64, Polynomial};
use crate::error::{Error, Result};
use crate::numeric;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootMode {
    Exact,
    Numeric { tolerance: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(BigRational),
    Complex(Complex64),
}

impl Root {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Root::Exact(r) => Complex64::new(to_f64(r), 0.0),
            Root::Complex(z) => *z,
        }
    }
}

/// Roots with multiplicities; multiplicities sum to the degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicRoots {
    pub roots: Vec<(Root, usize)>,
}

/// One basis solution `t^log_power * root^t`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub root: Root,
    pub log_power: usize,
}

impl BasisElement {
    /// Exact value at `t`; `None` for numeric roots or `0^t` with `t < 0`.
    pub fn eval_exact(&self, t: i64) -> Option<BigRational> {
        let Root::Exact(r) = &self.root else { return None };
        let tq = BigRational::from_integer(t.into());
        let power = if t >= 0 {
            num_traits::pow(r.clone(), t as usize)
        } else if r.is_zero() {
            return None;
        } else {
            num_traits::pow(r.recip(), (-t) as usize)
        };
        Some(num_traits::pow(tq, self.log_power) * power)
    }

    pub fn eval_complex(&self, t: i64) -> Complex64 {
        let r = self.root.to_complex();
        r.powi(t as i32) * (t as f64).powi(self.log_power as i32)
    }
}

/// Roots of `charpoly`. Exact mode fails when an irrational root remains;
/// numeric mode takes multiplicities from the exact squarefree
/// decomposition and locates each squarefree factor's roots numerically.
pub fn characteristic_roots(charpoly: &Polynomial, mode: RootMode) -> Result<CharacteristicRoots> {
    if charpoly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    match mode {
        RootMode::Exact => {
            let (rs, rest) = rational_roots(charpoly)?;
            if rest.degree().unwrap_or(0) > 0 {
                return Err(Error::NoExactRoots);
            }
            roots.extend(rs.into_iter().map(|(r, m)| (Root::Exact(r), m)));
        }
        RootMode::Numeric { .. } => {
            for (factor, m) in squarefree_decomposition(charpoly) {
                for z in numeric::poly_roots(&factor.to_complex_coeffs()) {
                    roots.push((Root::Complex(z), m));
                }
            }
        }
    }
    Ok(CharacteristicRoots { roots })
}

/// Basis `{t^j r^t : 0 <= j < mult(r)}` of the recurrence
/// `sum_k c_k y(t + k) = 0` whose characteristic polynomial is `charpoly`.
pub fn const_coeff_basis(charpoly: &Polynomial, mode: RootMode) -> Result<Vec<BasisElement>> {
    if charpoly.degree().unwrap_or(0) == 0 {
        return Err(Error::PreconditionViolated("characteristic polynomial needs degree >= 1".into()));
    }
    if charpoly.coeff(0).is_zero() {
        return Err(Error::PreconditionViolated("characteristic polynomial has a zero root".into()));
    }
    let roots = characteristic_roots(charpoly, mode)?;
    Ok(roots
        .roots
        .into_iter()
        .flat_map(|(root, m)| (0..m).map(move |j| BasisElement { root: root.clone(), log_power: j }))
        .collect())
}

/// Principal parts of `1 / F` at one root: `residues[k - 1]` is the
/// coefficient of `1 / (z - root)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFraction {
    pub root: BigRational,
    pub multiplicity: usize,
    pub residues: Vec<BigRational>,
}

/// Partial fractions of `1 / F` over rational roots.
///
/// With `F(root + e) = e^m G(e)`, the coefficient of `1/(z - root)^k` is
/// the `e^(m-k)` Taylor coefficient of `1 / G`, computed by exact power
/// series inversion; for a simple root it is `1 / F'(root)`.
pub fn cauchy_partial_fractions(f: &Polynomial) -> Result<Vec<PartialFraction>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (roots, rest) = rational_roots(f)?;
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::NoExactRoots);
    }
    let mut out = Vec::with_capacity(roots.len());
    for (root, m) in roots {
        let shifted = f.shift(&root);
        let g = &shifted.coeffs()[m..];
        let g0_inv = g[0].recip();
        let mut inv: Vec<BigRational> = Vec::with_capacity(m);
        for j in 0..m {
            if j == 0 {
                inv.push(g0_inv.clone());
                continue;
            }
            let mut acc = BigRational::zero();
            for i in 1..=j.min(g.len() - 1) {
                acc += &g[i] * &inv[j - i];
            }
            inv.push(-acc * &g0_inv);
        }
        let residues = (1..=m).map(|k| inv[m - k].clone()).collect();
        out.push(PartialFraction { root, multiplicity: m, residues });
    }
    Ok(out)
}

impl PartialFraction {
    /// Value of this principal part at `z`.
    pub fn eval(&self, z: &BigRational) -> BigRational {
        let d = z - &self.root;
        let mut acc = BigRational::zero();
        let mut pw = BigRational::one();
        for r in &self.residues {
            pw *= &d;
            acc += r / &pw;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn residual(charpoly: &Polynomial, e: &BasisElement, t: i64) -> BigRational {
        charpoly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c * e.eval_exact(t + k as i64).unwrap())
            .sum()
    }

    #[test]
    fn basis_examples() {
        let cp = p(&[2, -3, 1]);
        let b = const_coeff_basis(&cp, RootMode::Exact).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0], BasisElement { root: Root::Exact(q(1)), log_power: 0 });
        assert_eq!(b[1], BasisElement { root: Root::Exact(q(2)), log_power: 0 });
        for e in &b {
            for t in -3..7 {
                assert_eq!(residual(&cp, e, t), q(0));
            }
        }
        let double = p(&[1, -2, 1]);
        let b = const_coeff_basis(&double, RootMode::Exact).unwrap();
        assert_eq!(b[1], BasisElement { root: Root::Exact(q(1)), log_power: 1 });
        for e in &b {
            for t in 0..10 {
                assert_eq!(residual(&double, e, t), q(0));
            }
        }
        assert_eq!(const_coeff_basis(&p(&[-1, 1]), RootMode::Exact).unwrap().len(), 1);
    }

    #[test]
    fn irrational_roots_need_numeric_mode() {
        let cp = p(&[-2, 0, 1]);
        assert_eq!(const_coeff_basis(&cp, RootMode::Exact), Err(Error::NoExactRoots));
        let b = const_coeff_basis(&cp, RootMode::Numeric { tolerance: 1e-10 }).unwrap();
        for e in &b {
            let r: Complex64 = (0..3).map(|k| to_f64(&cp.coeff(k)) * e.eval_complex(4 + k as i64)).sum();
            assert!(r.norm() < 1e-10);
        }
    }

    #[test]
    fn partial_fraction_examples() {
        let pf = cauchy_partial_fractions(&p(&[2, -3, 1])).unwrap();
        assert_eq!(pf[0].residues, vec![q(-1)]);
        assert_eq!(pf[1].residues, vec![q(1)]);

        let pf = cauchy_partial_fractions(&p(&[0, 0, 1])).unwrap();
        assert_eq!(pf, vec![PartialFraction { root: q(0), multiplicity: 2, residues: vec![q(0), q(1)] }]);

        // (z-1)^2 (z-3)
        let f = &p(&[-1, 1]).pow(2) * &p(&[-3, 1]);
        let pf = cauchy_partial_fractions(&f).unwrap();
        for z in [q(0), q(2), q(5), qf(1, 3)] {
            let total: BigRational = pf.iter().map(|t| t.eval(&z)).sum();
            assert_eq!(total, f.eval(&z).recip());
        }
        assert_eq!(cauchy_partial_fractions(&Polynomial::zero()), Err(Error::ZeroPolynomial));
    }
}
