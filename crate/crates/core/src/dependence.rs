//! Linear dependence of sequences on integer windows: Casoratians, the
//! stacked sample-matrix rank analysis, windowed scans and relation
//! extraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::{determinant, nullspace, rank, Matrix};
use crate::error::{Error, Result};
use crate::forms::GridFunction;

/// Samples `f_j(m + i)` for `i in rows`.
fn sample_matrix(seqs: &[GridFunction], base: i64, rows: usize) -> Result<Matrix<BigRational>> {
    (0..rows as i64)
        .map(|i| seqs.iter().map(|f| f.get(base + i).cloned()).collect())
        .collect()
}

/// Determinant of `[f_j(m + i)]`, `0 <= i, j < n`.
pub fn casoratian(seqs: &[GridFunction], m: i64) -> Result<BigRational> {
    if seqs.is_empty() {
        return Err(Error::Invalid("no sequences".into()));
    }
    Ok(determinant(&sample_matrix(seqs, m, seqs.len())?))
}

/// The square sample matrix of `n + 1` sequences at base `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChristoffelMatrix {
    pub base: i64,
    pub entries: Matrix<BigRational>,
}

impl ChristoffelMatrix {
    pub fn new(seqs: &[GridFunction], base: i64) -> Result<Self> {
        Ok(Self { base, entries: sample_matrix(seqs, base, seqs.len())? })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn determinant(&self) -> BigRational {
        determinant(&self.entries)
    }

    /// Minor obtained by deleting the last row and column `mu`.
    pub fn minor(&self, mu: usize) -> BigRational {
        let n = self.size();
        let sub: Matrix<BigRational> = self.entries[..n - 1]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != mu).map(|(_, v)| v.clone()).collect())
            .collect();
        if sub.is_empty() {
            return BigRational::from_integer(1.into());
        }
        determinant(&sub)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DependenceCase {
    /// Exactly one relation.
    A,
    /// Two or more independent relations.
    B,
    /// Full column rank.
    None,
}

impl DependenceCase {
    pub fn name(self) -> &'static str {
        match self {
            DependenceCase::A => "a",
            DependenceCase::B => "b",
            DependenceCase::None => "none",
        }
    }
}

/// Rank analysis on the inclusive sample window `window.0..=window.1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DependenceReport {
    pub window: (i64, i64),
    pub rank: usize,
    /// Canonical basis of the relation space, each vector scaled to
    /// coprime integers with a positive first entry.
    pub relations: Vec<Vec<BigRational>>,
    pub case: DependenceCase,
}

/// Scale a vector to coprime integers with positive first nonzero entry.
pub fn primitive_relation(v: &[BigRational]) -> Vec<BigRational> {
    let den = v.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v.to_vec();
    }
    if ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|c| BigRational::from_integer(c / &g)).collect()
}

fn report(seqs: &[GridFunction], lo: i64, hi: i64) -> Result<DependenceReport> {
    let rows = (hi - lo + 1) as usize;
    let m = sample_matrix(seqs, lo, rows)?;
    let r = rank(&m);
    let relations: Vec<Vec<BigRational>> =
        nullspace(&m, seqs.len()).iter().map(|v| primitive_relation(v)).collect();
    let case = match relations.len() {
        0 => DependenceCase::None,
        1 => DependenceCase::A,
        _ => DependenceCase::B,
    };
    Ok(DependenceReport { window: (lo, hi), rank: r, relations, case })
}

/// Rank of the `(p + n + 1) x (n + 1)` stacked matrix `[f_j(m0 + i)]` for
/// `n + 1 = seqs.len()` sequences, with its relation space.
pub fn christoffel_analyze(seqs: &[GridFunction], m0: i64, p: i64) -> Result<DependenceReport> {
    if p < 0 {
        return Err(Error::InsufficientWindow(format!("p = {p} must be nonnegative")));
    }
    if seqs.is_empty() {
        return Err(Error::Invalid("no sequences".into()));
    }
    let n = seqs.len() as i64 - 1;
    report(seqs, m0, m0 + n + p)
}

/// Slides a window of `window_length` samples across `range` (inclusive)
/// and merges adjacent windows with identical relation spaces.
pub fn windowed_scan(seqs: &[GridFunction], range: (i64, i64), window_length: usize) -> Result<Vec<DependenceReport>> {
    if seqs.is_empty() {
        return Err(Error::Invalid("no sequences".into()));
    }
    if window_length < seqs.len() {
        return Err(Error::InsufficientWindow(format!(
            "window length {window_length} is shorter than the {} sequences",
            seqs.len()
        )));
    }
    let (lo, hi) = range;
    let last_start = hi - window_length as i64 + 1;
    if last_start < lo {
        return Err(Error::InsufficientWindow(format!("range {lo}..{hi} is shorter than the window")));
    }
    let mut out: Vec<DependenceReport> = Vec::new();
    for s in lo..=last_start {
        let r = report(seqs, s, s + window_length as i64 - 1)?;
        match out.last_mut() {
            Some(prev) if prev.relations == r.relations && prev.rank == r.rank => prev.window.1 = r.window.1,
            _ => out.push(r),
        }
    }
    Ok(out)
}

/// Outcome of looking for a constant-coefficient relation on a window
/// where every Casoratian vanishes.
#[derive(Clone, Debug, PartialEq)]
pub enum RelationCheck {
    /// A constant relation holds at every sample point. `window_limited`
    /// is set when the window has fewer samples than sequences, so the
    /// relation is forced by the shortage of data.
    Constant { relation: Vec<BigRational>, window_limited: bool },
    /// Each Casoratian matrix is singular but their null vectors differ:
    /// only a relation with point-dependent coefficients exists.
    NonConstantOnly { local: Vec<(i64, Vec<BigRational>)> },
}

/// Requires every Casoratian that fits inside `window` (inclusive sample
/// range) to vanish, then returns a constant relation if the stacked
/// samples admit one.
pub fn casoratian_zero_implies_relation_check(seqs: &[GridFunction], window: (i64, i64)) -> Result<RelationCheck> {
    let n = seqs.len();
    if n == 0 {
        return Err(Error::Invalid("no sequences".into()));
    }
    let (lo, hi) = window;
    if hi < lo {
        return Err(Error::InsufficientWindow(format!("empty window {lo}..{hi}")));
    }
    let mut local = Vec::new();
    for m in lo..=hi - n as i64 + 1 {
        let c = ChristoffelMatrix::new(seqs, m)?;
        if !c.determinant().is_zero() {
            return Err(Error::PreconditionViolated(format!("Casoratian is nonzero at m = {m}")));
        }
        let ns = nullspace(&c.entries, n);
        local.push((m, primitive_relation(&ns[0])));
    }
    let rows = (hi - lo + 1) as usize;
    let stacked = sample_matrix(seqs, lo, rows)?;
    if let Some(v) = nullspace(&stacked, n).first() {
        return Ok(RelationCheck::Constant { relation: primitive_relation(v), window_limited: rows < n });
    }
    Ok(RelationCheck::NonConstantOnly { local })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn poly_seq(k: u32, base: i64, len: usize) -> GridFunction {
        GridFunction::from_fn(base, len, |t| q(t.pow(k)))
    }

    fn pow2(scale: i64, base: i64, len: usize) -> GridFunction {
        GridFunction::from_fn(base, len, move |t| {
            let p = num_traits::pow(q(2), t.unsigned_abs() as usize);
            q(scale) * if t >= 0 { p } else { p.recip() }
        })
    }

    /// Permutation-sum determinant, independent of elimination.
    fn leibniz(m: &Matrix<BigRational>) -> BigRational {
        fn go(m: &Matrix<BigRational>, row: usize, used: &mut Vec<bool>, sign: i64) -> BigRational {
            if row == m.len() {
                return q(sign);
            }
            let mut acc = q(0);
            for j in 0..m.len() {
                if used[j] {
                    continue;
                }
                let inversions = used[j + 1..].iter().filter(|&&u| u).count();
                let s = if inversions % 2 == 0 { sign } else { -sign };
                used[j] = true;
                acc += &m[row][j] * go(m, row + 1, used, s);
                used[j] = false;
            }
            acc
        }
        go(m, 0, &mut vec![false; m.len()], 1)
    }

    #[test]
    fn vandermonde_casoratians() {
        for m in -5..=5 {
            let s3: Vec<_> = (0..3).map(|k| poly_seq(k, -10, 30)).collect();
            assert_eq!(casoratian(&s3, m).unwrap(), q(2));
            assert_eq!(leibniz(&sample_matrix(&s3, m, 3).unwrap()), q(2));
            let s4: Vec<_> = (0..4).map(|k| poly_seq(k, -10, 30)).collect();
            assert_eq!(casoratian(&s4, m).unwrap(), q(12));
        }
        let prop = [pow2(1, -3, 10), pow2(3, -3, 10)];
        assert_eq!(casoratian(&prop, 0).unwrap(), q(0));
        assert_eq!(casoratian(&prop, 20), Err(Error::OutOfWindow(20)));
    }

    #[test]
    fn christoffel_cases() {
        let f = poly_seq(2, 0, 12);
        let r = christoffel_analyze(&[f.clone(), f.scale(&q(2))], 0, 3).unwrap();
        assert_eq!(r.case, DependenceCase::A);
        assert_eq!(r.relations, vec![vec![q(2), q(-1)]]);
        let r = christoffel_analyze(&[f.clone(), f.scale(&q(2)), f.scale(&q(5))], 0, 3).unwrap();
        assert_eq!(r.case, DependenceCase::B);
        assert_eq!(r.relations.len(), 2);
        assert_eq!(r.rank, 1);
        let fam: Vec<_> = (0..3).map(|k| poly_seq(k, 0, 12)).collect();
        let r = christoffel_analyze(&fam, 2, 4).unwrap();
        assert_eq!(r.case, DependenceCase::None);
        assert!(r.relations.is_empty());
        assert!(matches!(christoffel_analyze(&fam, 0, -1), Err(Error::InsufficientWindow(_))));
    }

    #[test]
    fn scan_finds_transition() {
        let f = GridFunction::from_fn(-10, 30, |t| q(t * t + 1));
        let g = GridFunction::from_fn(-10, 30, |t| if t < 0 { q(t * t + 1) } else { q(t * t * t + 7) });
        let scan = windowed_scan(&[f.clone(), g], (-10, 19), 3).unwrap();
        assert!(scan.len() >= 2);
        assert_eq!(scan[0].case, DependenceCase::A);
        assert_eq!(scan.last().unwrap().case, DependenceCase::None);
        assert!(scan.last().unwrap().window.0 <= 5);

        let scan = windowed_scan(&[f.clone(), f.scale(&q(3))], (-10, 19), 4).unwrap();
        assert_eq!(scan.len(), 1);
        assert_eq!(scan[0].window, (-10, 19));

        let fam: Vec<_> = (0..3).map(|k| poly_seq(k, 0, 12)).collect();
        let scan = windowed_scan(&fam, (0, 11), 3).unwrap();
        assert!(scan.iter().all(|r| r.case == DependenceCase::None));
    }

    #[test]
    fn relation_check() {
        let pair = [pow2(1, 0, 8), pow2(3, 0, 8)];
        assert_eq!(
            casoratian_zero_implies_relation_check(&pair, (0, 6)).unwrap(),
            RelationCheck::Constant { relation: vec![q(3), q(-1)], window_limited: false }
        );
        let lin = [poly_seq(0, 0, 5), poly_seq(1, 0, 5)];
        match casoratian_zero_implies_relation_check(&lin, (2, 2)).unwrap() {
            RelationCheck::Constant { relation, window_limited } => {
                assert!(window_limited);
                assert_eq!(&relation[0] + &relation[1] * q(2), q(0));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            casoratian_zero_implies_relation_check(&lin, (0, 3)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn point_dependent_relation() {
        // Every 2x2 block has a zero row, but the kernel moves with m.
        let f = GridFunction::from_fn(0, 10, |t| if t % 2 == 0 { q(1) } else { q(0) });
        let g = GridFunction::from_fn(0, 10, |t| if t % 2 == 0 { q(t + 1) } else { q(0) });
        match casoratian_zero_implies_relation_check(&[f, g], (0, 8)).unwrap() {
            RelationCheck::NonConstantOnly { local } => assert_eq!(local.len(), 8),
            other => panic!("{other:?}"),
        }
    }
}
