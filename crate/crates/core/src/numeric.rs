//! Double-precision helpers: polynomial roots via companion-matrix Schur
//! decomposition, and SVD ranks. Backed by nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Complex roots of `sum c_k z^k` (coefficients low to high), polished by
/// a few Newton steps.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|v| v.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i] / lead;
    }
    let n_iter = 200 * n.max(10);
    match comp.try_schur(f64::EPSILON, n_iter) {
        Some(schur) => schur
            .eigenvalues()
            .expect("complex Schur form always yields eigenvalues")
            .iter()
            .map(|&z| newton_polish(&c, z))
            .collect(),
        None => aberth(&c),
    }
}

/// Simultaneous Aberth-Ehrlich iteration; used when the Schur iteration
/// stalls, which happens for some polynomials with repeated roots.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let radius = c[..n].iter().map(|a| (a / lead).norm()).fold(0.0, f64::max) + 1.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for &a in c.iter().rev() {
                dp = dp * z[i] + p;
                p = p * z[i] + a;
            }
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn newton_polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        if dp.norm() < 1e-300 {
            break;
        }
        let step = p / dp;
        let cand = z - step;
        if !cand.re.is_finite() || !cand.im.is_finite() {
            break;
        }
        // keep the step only when it helps; multiple roots converge slowly
        let pc = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * cand + a);
        if pc.norm() < p.norm() {
            z = cand;
        } else {
            break;
        }
    }
    z
}

/// Eigenvalues of a square matrix from its complex Schur form, falling
/// back to the roots of the characteristic polynomial (Faddeev-LeVerrier)
/// if the Schur iteration stalls.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    if let Some(schur) = m.clone().try_schur(f64::EPSILON, 200 * n.max(10)) {
        if let Some(eig) = schur.eigenvalues() {
            return eig.iter().copied().collect();
        }
    }
    // coefficients of det(z I - m), high to low
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut mk = DMatrix::<Complex64>::zeros(n, n);
    let id = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=n {
        mk = m * (&mk + &id * coeffs[k - 1]);
        coeffs.push(-mk.trace() / Complex64::new(k as f64, 0.0));
    }
    coeffs.reverse();
    poly_roots(&coeffs)
}

/// Numerical rank: singular values above `rel_tol * sigma_max`.
pub fn rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

pub fn to_dmatrix(rows: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, m, |i, j| rows[i][j])
}
