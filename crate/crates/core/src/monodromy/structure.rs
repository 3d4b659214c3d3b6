use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::formal::FormalLocalSolution;
use super::scalar::{Exponent, Scalar, DEFAULT_TOLERANCE};
use crate::algebra::{nullspace, rank, rational_roots, squarefree_decomposition, Matrix, Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::forms::DifferenceForm;
use crate::numeric;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric,
}

/// Square monodromy matrix: the action of `theta` on a basis of local
/// solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromySpec {
    matrix: Vec<Vec<Scalar>>,
    mode: Mode,
    tolerance: f64,
}

impl MonodromySpec {
    pub fn exact(m: Matrix<BigRational>) -> Result<Self> {
        let matrix = m.into_iter().map(|r| r.into_iter().map(Scalar::Exact).collect()).collect();
        Self::new(matrix, Mode::Exact, DEFAULT_TOLERANCE)
    }

    pub fn numeric(m: Vec<Vec<Complex64>>, tolerance: f64) -> Result<Self> {
        let matrix = m.into_iter().map(|r| r.into_iter().map(Scalar::Numeric).collect()).collect();
        Self::new(matrix, Mode::Numeric, tolerance)
    }

    /// Exact mode requires every entry to be exact.
    pub fn new(matrix: Vec<Vec<Scalar>>, mode: Mode, tolerance: f64) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        if !(tolerance > 0.0) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        if mode == Mode::Exact && matrix.iter().flatten().any(|s| !s.is_exact()) {
            return Err(Error::Invalid("exact mode needs rational entries".into()));
        }
        Ok(Self { matrix, mode, tolerance })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.matrix
    }

    fn exact_matrix(&self) -> Option<Matrix<BigRational>> {
        self.matrix.iter().map(|r| r.iter().map(|s| s.as_exact().cloned()).collect()).collect()
    }

    fn complex_matrix(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.matrix[i][j].to_complex())
    }
}

/// Constant-coefficient form `sum c_k theta^k`, coefficients low to high.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantForm {
    pub coeffs: Vec<Scalar>,
}

impl ConstantForm {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The same form over `Q(x)` when every coefficient is exact.
    pub fn to_difference_form(&self) -> Option<DifferenceForm> {
        let cs: Option<Vec<_>> = self
            .coeffs
            .iter()
            .map(|c| c.as_exact().map(|r| RationalFunction::constant(r.clone())))
            .collect();
        cs.map(DifferenceForm::new)
    }

    pub fn to_polynomial(&self) -> Option<Polynomial> {
        let cs: Option<Vec<_>> = self.coeffs.iter().map(|c| c.as_exact().cloned()).collect();
        cs.map(Polynomial::new)
    }

    /// `sum_k c_k theta^k (y)` in the formal ring.
    pub fn apply(&self, y: &FormalLocalSolution) -> FormalLocalSolution {
        let mut acc = FormalLocalSolution::zero();
        let mut p = y.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                p = p.theta();
            }
            acc = acc.add(&p.scale(c));
        }
        acc
    }

    /// `sum_k c_k s[n + k]` for `n` in `0..=s.len() - coeffs.len()`.
    pub fn residuals(&self, s: &[Scalar]) -> Vec<Scalar> {
        let k = self.coeffs.len();
        (0..=s.len().saturating_sub(k))
            .map(|n| (0..k).fold(Scalar::zero(), |acc, i| acc.add(&self.coeffs[i].mul(&s[n + i]))))
            .collect()
    }
}

type SMatrix = Vec<Vec<Scalar>>;

fn smul(a: &SMatrix, b: &SMatrix) -> SMatrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Scalar::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))).collect())
        .collect()
}

/// `det(z I - m)` by the Faddeev-LeVerrier recursion, coefficients low to
/// high; exact when every entry is exact.
pub fn characteristic_polynomial(m: &[Vec<Scalar>]) -> Vec<Scalar> {
    let n = m.len();
    let mut c = vec![Scalar::zero(); n + 1];
    c[n] = Scalar::one();
    let mut mk: SMatrix = vec![vec![Scalar::zero(); n]; n];
    let a: SMatrix = m.to_vec();
    for k in 1..=n {
        let mut next = smul(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&c[n - k + 1]);
        }
        mk = next;
        let am = smul(&a, &mk);
        let tr = (0..n).fold(Scalar::zero(), |acc, i| acc.add(&am[i][i]));
        let inv_k = Scalar::Exact(BigRational::new((-1).into(), (k as i64).into()));
        c[n - k] = tr.mul(&inv_k);
    }
    c
}

/// The constant-coefficient equation whose characteristic polynomial is
/// that of the monodromy matrix.
pub fn companion_difference_equation(spec: &MonodromySpec) -> ConstantForm {
    let matrix: SMatrix = match spec.mode {
        Mode::Exact => spec.matrix.clone(),
        Mode::Numeric => spec.matrix.iter().map(|r| r.iter().map(|s| Scalar::Numeric(s.to_complex())).collect()).collect(),
    };
    ConstantForm { coeffs: characteristic_polynomial(&matrix) }
}

fn identity_q(n: usize) -> Matrix<BigRational> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect()
}

fn qmul(a: &Matrix<BigRational>, b: &Matrix<BigRational>) -> Matrix<BigRational> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

/// `p(m)` by Horner's rule.
fn poly_at_matrix(p: &Polynomial, m: &Matrix<BigRational>) -> Matrix<BigRational> {
    let n = m.len();
    let mut acc = vec![vec![BigRational::zero(); n]; n];
    for c in p.coeffs().iter().rev() {
        acc = qmul(&acc, m);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

/// The minimal polynomial of the monodromy matrix: the first linear
/// dependency in `I, M, M^2, ...`, made monic.
pub fn minimal_relation(spec: &MonodromySpec) -> ConstantForm {
    let n = spec.dim();
    if let (Mode::Exact, Some(m)) = (spec.mode, spec.exact_matrix()) {
        let mut powers = vec![identity_q(n)];
        for k in 1..=n {
            powers.push(qmul(powers.last().unwrap(), &m));
            // columns are the flattened powers
            let a: Matrix<BigRational> = (0..n * n)
                .map(|idx| powers.iter().map(|p| p[idx / n][idx % n].clone()).collect())
                .collect();
            if let Some(v) = nullspace(&a, k + 1).first() {
                let lead = v[k].clone();
                return ConstantForm { coeffs: v.iter().map(|c| Scalar::Exact(c / &lead)).collect() };
            }
        }
        unreachable!("Cayley-Hamilton bounds the degree by n");
    }
    let m = spec.complex_matrix();
    let mut powers = vec![DMatrix::<Complex64>::identity(n, n)];
    for k in 1..=n {
        powers.push(powers.last().unwrap() * &m);
        let a = DMatrix::from_fn(n * n, k + 1, |idx, j| {
            let p = &powers[j];
            p[(idx / n, idx % n)] / p.norm().max(f64::MIN_POSITIVE)
        });
        if numeric::rank(&a, spec.tolerance.sqrt()) <= k || k == n {
            let lhs = DMatrix::from_fn(n * n, k, |idx, j| powers[j][(idx / n, idx % n)]);
            let rhs = DMatrix::from_fn(n * n, 1, |idx, _| -powers[k][(idx / n, idx % n)]);
            let sol = lhs.svd(true, true).solve(&rhs, 1e-14).expect("SVD solve");
            let mut coeffs: Vec<Scalar> = (0..k).map(|j| Scalar::Numeric(sol[(j, 0)])).collect();
            coeffs.push(Scalar::one());
            return ConstantForm { coeffs };
        }
    }
    unreachable!()
}

/// One eigenvalue with its exponent and Jordan block sizes (descending).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenBlock {
    pub eigenvalue: Scalar,
    pub exponent: Exponent,
    pub jordan_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalStructure {
    pub blocks: Vec<EigenBlock>,
}

impl LocalStructure {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.jordan_sizes.iter().sum::<usize>()).sum()
    }
}

/// Block sizes from `d_j`, the number of blocks of size at least `j`.
fn sizes_from_counts(d: &[usize]) -> Vec<usize> {
    let mut sizes = Vec::new();
    for s in (1..d.len()).rev() {
        let exactly = d[s] - d.get(s + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat(s).take(exactly));
    }
    sizes
}

/// Per-root Jordan sizes from the ranks of `q(M)^j`, where `q` is a
/// squarefree factor whose roots share one Jordan structure.
fn jordan_sizes_exact(m: &Matrix<BigRational>, q: &Polynomial, mult: usize) -> Option<Vec<usize>> {
    let n = m.len();
    let deg = q.degree().unwrap_or(0);
    let qm = poly_at_matrix(q, m);
    let mut ranks = vec![n];
    let mut p = identity_q(n);
    for _ in 0..mult {
        p = qmul(&p, &qm);
        ranks.push(rank(&p));
        if ranks[ranks.len() - 1] == ranks[ranks.len() - 2] {
            break;
        }
    }
    let mut d = vec![0];
    for j in 1..ranks.len() {
        let drop = ranks[j - 1] - ranks[j];
        if drop % deg != 0 {
            return None;
        }
        d.push(drop / deg);
    }
    let sizes = sizes_from_counts(&d);
    (sizes.iter().sum::<usize>() == mult).then_some(sizes)
}

fn cyclotomic(n: usize) -> Polynomial {
    let mut p = Polynomial::monomial(BigRational::one(), n) - Polynomial::one();
    for d in 1..n {
        if n % d == 0 {
            p = p.exact_div(&cyclotomic(d)).expect("cyclotomic factors divide x^n - 1");
        }
    }
    p
}

fn numeric_sizes(m: &DMatrix<Complex64>, lambda: Complex64, mult: usize, tol: f64) -> Option<Vec<usize>> {
    let n = m.nrows();
    let shifted = m - DMatrix::identity(n, n) * lambda;
    let mut ranks = vec![n];
    let mut p = DMatrix::<Complex64>::identity(n, n);
    for _ in 0..mult {
        p = &p * &shifted;
        ranks.push(numeric::rank(&p, tol.sqrt()));
    }
    let d: Vec<usize> = std::iter::once(0).chain((1..ranks.len()).map(|j| ranks[j - 1].saturating_sub(ranks[j]))).collect();
    let sizes = sizes_from_counts(&d);
    (sizes.iter().sum::<usize>() == mult).then_some(sizes)
}

/// Eigenvalues with Jordan block sizes and exponents
/// `rho = log(lambda) / (2 pi i)` with `Re rho` in `[0, 1)`.
///
/// In exact mode rational eigenvalues and roots of unity of order up to
/// 24 are handled exactly; any remaining irrational eigenvalues are
/// located numerically, with block sizes still taken from exact ranks
/// where possible.
pub fn local_structure(spec: &MonodromySpec) -> Result<LocalStructure> {
    match (spec.mode, spec.exact_matrix()) {
        (Mode::Exact, Some(m)) => exact_structure(spec, &m),
        _ => numeric_structure(&spec.complex_matrix(), spec.tolerance),
    }
}

fn exact_structure(spec: &MonodromySpec, m: &Matrix<BigRational>) -> Result<LocalStructure> {
    let coeffs = characteristic_polynomial(&spec.matrix);
    let p = Polynomial::new(coeffs.iter().map(|c| c.as_exact().cloned().expect("exact")).collect());
    if p.coeff(0).is_zero() {
        return Err(Error::SingularMonodromy);
    }
    let cm = spec.complex_matrix();
    let mut blocks = Vec::new();
    for (factor, mult) in squarefree_decomposition(&p) {
        let (roots, mut rest) = rational_roots(&factor)?;
        for (lambda, _) in roots {
            let lin = Polynomial::linear_root(&lambda);
            let sizes = jordan_sizes_exact(m, &lin, mult).expect("linear factor");
            blocks.push(EigenBlock {
                exponent: Exponent::of_rational_multiplier(&lambda),
                eigenvalue: Scalar::Exact(lambda),
                jordan_sizes: sizes,
            });
        }
        for order in 3..=24usize {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let phi = cyclotomic(order);
            let Some(quot) = rest.exact_div(&phi) else { continue };
            rest = quot;
            let sizes = jordan_sizes_exact(m, &phi, mult);
            for k in (1..order).filter(|k| k.gcd(&order) == 1) {
                let lambda = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / order as f64);
                let sizes = match &sizes {
                    Some(s) => s.clone(),
                    None => numeric_sizes(&cm, lambda, mult, spec.tolerance).ok_or(Error::EigenfailNumeric(spec.tolerance))?,
                };
                blocks.push(EigenBlock {
                    eigenvalue: Scalar::Numeric(lambda),
                    exponent: Exponent::rational(BigRational::new((k as i64).into(), (order as i64).into())),
                    jordan_sizes: sizes,
                });
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            let sizes = jordan_sizes_exact(m, &rest.monic(), mult);
            for lambda in numeric::poly_roots(&rest.to_complex_coeffs()) {
                let sizes = match &sizes {
                    Some(s) => s.clone(),
                    None => numeric_sizes(&cm, lambda, mult, spec.tolerance).ok_or(Error::EigenfailNumeric(spec.tolerance))?,
                };
                blocks.push(EigenBlock {
                    eigenvalue: Scalar::Numeric(lambda),
                    exponent: Exponent::of_multiplier(lambda),
                    jordan_sizes: sizes,
                });
            }
        }
    }
    Ok(LocalStructure { blocks })
}

fn numeric_structure(m: &DMatrix<Complex64>, tol: f64) -> Result<LocalStructure> {
    let n = m.nrows();
    let eig = crate::numeric::eigenvalues(m);
    let scale = m.norm().max(1.0);
    if eig.iter().any(|z| z.norm() <= tol * scale) {
        return Err(Error::SingularMonodromy);
    }
    let radius = |z: Complex64| tol.powf(1.0 / n as f64) * z.norm().max(1.0);
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for &z in eig.iter() {
        match clusters.iter_mut().find(|c| (c[0] - z).norm() <= radius(c[0])) {
            Some(c) => c.push(z),
            None => clusters.push(vec![z]),
        }
    }
    let centers: Vec<Complex64> =
        clusters.iter().map(|c| c.iter().sum::<Complex64>() / c.len() as f64).collect();
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if (centers[i] - centers[j]).norm() < 10.0 * radius(centers[i]) {
                return Err(Error::EigenfailNumeric(tol));
            }
        }
    }
    let mut blocks = Vec::new();
    for (c, &lambda) in clusters.iter().zip(&centers) {
        let sizes = numeric_sizes(m, lambda, c.len(), tol).ok_or(Error::EigenfailNumeric(tol))?;
        blocks.push(EigenBlock {
            eigenvalue: Scalar::Numeric(lambda),
            exponent: Exponent::of_multiplier(lambda),
            jordan_sizes: sizes,
        });
    }
    blocks.sort_by(|a, b| {
        let (x, y) = (a.exponent.to_complex(), b.exponent.to_complex());
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    Ok(LocalStructure { blocks })
}

/// Canonical local solutions `x^(rho + c) t^k`, `0 <= k < size`, one
/// chain per Jordan block; `c` counts earlier blocks of the same
/// eigenvalue so that equal chains stay independent.
pub fn canonical_fundamental_system(spec: &MonodromySpec) -> Result<Vec<FormalLocalSolution>> {
    let ls = local_structure(spec)?;
    Ok(canonical_from_structure(&ls))
}

pub fn canonical_from_structure(ls: &LocalStructure) -> Vec<FormalLocalSolution> {
    let mut out = Vec::new();
    for b in &ls.blocks {
        for (c, &size) in b.jordan_sizes.iter().enumerate() {
            let e = b.exponent.shift(c as i64);
            for k in 0..size {
                out.push(FormalLocalSolution::monomial(e.clone(), k, Scalar::one()));
            }
        }
    }
    out
}

/// Matrix of `theta` on a basis of single-term solutions: column `j`
/// holds the coordinates of `theta(y_j)`.
pub fn theta_action_matrix(basis: &[FormalLocalSolution]) -> Result<Vec<Vec<Scalar>>> {
    let mono: Vec<_> = basis
        .iter()
        .map(|y| match y.terms() {
            [t] => Ok(t.clone()),
            _ => Err(Error::Invalid("basis elements must be single terms".into())),
        })
        .collect::<Result<_>>()?;
    let n = basis.len();
    let mut a = vec![vec![Scalar::zero(); n]; n];
    for (j, y) in basis.iter().enumerate() {
        for t in y.theta().terms() {
            let i = mono
                .iter()
                .position(|m| m.log_power == t.log_power && m.exponent.approx_eq(&t.exponent, DEFAULT_TOLERANCE))
                .ok_or_else(|| Error::Invalid("theta leaves the span of the basis".into()))?;
            a[i][j] = t.coeff.mul(&mono[i].coeff.inv().ok_or(Error::DivisionByZero)?);
        }
    }
    Ok(a)
}
