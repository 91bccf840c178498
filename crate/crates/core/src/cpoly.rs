//! Univariate polynomials with complex double-precision coefficients.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // math methods come from here when std is absent
use num_traits::Float;
use num_traits::{One, Zero};

/// Relative residual accepted by [`roots`] when the caller has no opinion.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Two roots closer than this multiple of the root bound count as one
/// multiple root.
pub const MULTIPLE_ROOT_FACTOR: f64 = 1e-6;

const MAX_ABERTH_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum CPolyError {
    #[error("polynomial has degree {got}, need at least {need}")]
    DegreeTooLow { got: usize, need: usize },
    #[error("root finder did not converge: relative residual {residual:e} after {iterations} iterations")]
    NumericFailure { iterations: usize, residual: f64 },
}

/// Coefficients constant term first; trailing exact zeros are stripped, so
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(alloc::vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = alloc::vec![Complex64::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::constant(Complex64::one());
        for &r in roots {
            p = &p * &Self::new(alloc::vec![-r, Complex64::one()]);
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_else(Complex64::zero)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * x + c)
    }

    /// `sum |a_i| |x|^i`, the scale against which `|p(x)|` is judged.
    pub fn eval_scale(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(&lc) => self.scale(lc.inv()),
            None => self.clone(),
        }
    }

    /// Drops leading coefficients below `rel` times the largest one.
    pub fn trim(&self, rel: f64) -> Self {
        let max = self.max_norm();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= rel * max) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Quotient and remainder of long division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &CPoly) -> (CPoly, CPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (CPoly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dl = d.coeffs.len();
        let lc = d.leading();
        let mut q = alloc::vec![Complex64::zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let f = r[k + dl - 1] / lc;
            q[k] = f;
            for (j, &c) in d.coeffs.iter().enumerate() {
                r[k + j] -= f * c;
            }
        }
        r.truncate(dl - 1);
        (CPoly::new(q), CPoly::new(r))
    }
}

impl Add for &CPoly {
    type Output = CPoly;

    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &CPoly {
    type Output = CPoly;

    fn sub(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &CPoly {
    type Output = CPoly;

    fn neg(self) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &CPoly {
    type Output = CPoly;

    fn mul(self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = alloc::vec![Complex64::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }
}

/// Roots of a polynomial, in canonical order (see [`sort_roots`]).
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// Largest `|p(r)|` over the roots, for the monic normalization of `p`.
    pub residual_bound: f64,
}

impl RootSet {
    /// Smallest distance between two roots; infinite for fewer than two.
    pub fn min_separation(&self) -> f64 {
        min_separation(&self.roots)
    }
}

pub fn min_separation(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// Sorts by real part rounded to a `1e-9` grid, then by imaginary part, so
/// that roots differing only by rounding in the real part order by height.
pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(root_order);
}

/// The order used by [`sort_roots`].
pub fn root_order(a: &Complex64, b: &Complex64) -> core::cmp::Ordering {
    let ka = (a.re * 1e9).round() + 0.0;
    let kb = (b.re * 1e9).round() + 0.0;
    ka.total_cmp(&kb).then(a.im.total_cmp(&b.im))
}

/// `max(1, sum_{i<d} |a_i|)` for the monic normalization; every root lies in
/// the closed disk of this radius.
pub fn root_bound(p: &CPoly) -> f64 {
    let m = p.monic();
    let d = m.degree();
    let s: f64 = m.coeffs.iter().take(d).map(|c| c.norm()).sum();
    s.max(1.0)
}

/// Distance below which two roots of `p` are treated as one multiple root.
pub fn multiple_root_threshold(p: &CPoly) -> f64 {
    MULTIPLE_ROOT_FACTOR * root_bound(p)
}

/// All roots by Aberth–Ehrlich iteration followed by Newton polishing.
///
/// Fails unless every root has `|p(r)| <= tol * sum |a_i| |r|^i`.
pub fn roots(p: &CPoly, tol: f64) -> Result<RootSet, CPolyError> {
    let d = p.degree();
    if p.is_zero() || d == 0 {
        return Err(CPolyError::DegreeTooLow { got: 0, need: 1 });
    }
    let m = p.monic();
    let dm = m.derivative();
    // Cauchy-type radius for the initial circle.
    let radius = (0..d)
        .map(|i| m.coeffs[i].norm().powf(1.0 / (d - i) as f64))
        .fold(0.0, f64::max);
    if radius == 0.0 {
        return Ok(RootSet {
            roots: alloc::vec![Complex64::zero(); d],
            residual_bound: 0.0,
        });
    }
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let r = radius * (1.0 + 0.01 * k as f64 / d as f64);
            Complex64::from_polar(r, TAU * k as f64 / d as f64 + 0.4)
        })
        .collect();
    let mut done = alloc::vec![false; d];
    let mut iterations = 0;
    while iterations < MAX_ABERTH_ITERATIONS && !done.iter().all(|&x| x) {
        iterations += 1;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let v = m.eval(zk);
            if v.norm() <= 4.0 * f64::EPSILON * m.eval_scale(zk) {
                done[k] = true;
                continue;
            }
            let ratio = v / dm.eval(zk);
            let sum: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (zk - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::one() - ratio * sum);
            if !step.is_finite() {
                continue;
            }
            z[k] = zk - step;
            if step.norm() <= f64::EPSILON * zk.norm() {
                done[k] = true;
            }
        }
    }
    for k in 0..d {
        polish(&m, &dm, &mut z, k);
    }
    let mut worst = 0.0f64;
    let mut residual_bound = 0.0f64;
    for &r in &z {
        let v = m.eval(r).norm();
        residual_bound = residual_bound.max(v);
        let scale = m.eval_scale(r);
        worst = worst.max(if scale > 0.0 { v / scale } else { v });
    }
    if !(worst <= tol) {
        return Err(CPolyError::NumericFailure {
            iterations,
            residual: worst,
        });
    }
    sort_roots(&mut z);
    Ok(RootSet {
        roots: z,
        residual_bound,
    })
}

/// A few Newton steps on root `k`, each kept only if it lowers the residual
/// and stays well away from the other roots.
fn polish(m: &CPoly, dm: &CPoly, z: &mut [Complex64], k: usize) {
    let others = z
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, &w)| (w - z[k]).norm())
        .fold(f64::INFINITY, f64::min);
    for _ in 0..3 {
        let zk = z[k];
        let v = m.eval(zk);
        let dv = dm.eval(zk);
        if v.is_zero() || dv.is_zero() {
            return;
        }
        let next = zk - v / dv;
        if (next - zk).norm() < 0.25 * others && m.eval(next).norm() < v.norm() {
            z[k] = next;
        } else {
            return;
        }
    }
}

/// Sylvester matrix of `p` (degree `m`) and `q` (degree `n`), given as
/// coefficient slices constant term first: `n` shifted rows of `p` followed
/// by `m` shifted rows of `q`, coefficients highest power first.
pub fn sylvester_matrix<T: Clone>(p: &[T], q: &[T], zero: T) -> Vec<Vec<T>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = alloc::vec![zero.clone(); size];
        for (k, c) in p.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = alloc::vec![zero.clone(); size];
        for (k, c) in q.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant as the determinant of the Sylvester matrix.
pub fn sylvester_resultant(p: &CPoly, q: &CPoly) -> Result<Complex64, CPolyError> {
    for poly in [p, q] {
        if poly.is_zero() || poly.degree() == 0 {
            return Err(CPolyError::DegreeTooLow { got: 0, need: 1 });
        }
    }
    Ok(crate::linalg::det(sylvester_matrix(
        p.coeffs(),
        q.coeffs(),
        Complex64::zero(),
    )))
}

/// `(-1)^{d(d-1)/2} Res(p, p') / lc(p)`, computed for the monic
/// normalization. For `w^3 + a w + b` this is `-4a^3 - 27b^2`.
pub fn discriminant(p: &CPoly) -> Result<Complex64, CPolyError> {
    let d = p.degree();
    if p.is_zero() || d < 2 {
        return Err(CPolyError::DegreeTooLow { got: d, need: 2 });
    }
    let m = p.monic();
    let res = sylvester_resultant(&m, &m.derivative())?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -res } else { res })
}

/// Determinant of a matrix of polynomials by fraction-free (Bareiss)
/// elimination. Each exact division is carried out by long division; the
/// remainder, nonzero only through rounding, is dropped and leading
/// coefficients below `rel` of the largest are trimmed.
pub fn poly_det(mut m: Vec<Vec<CPoly>>, rel: f64) -> CPoly {
    let n = m.len();
    if n == 0 {
        return CPoly::constant(Complex64::one());
    }
    let mut sign = false;
    let mut prev = CPoly::constant(Complex64::one());
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = !sign;
                }
                None => return CPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_rem(&prev).0.trim(rel);
            }
            m[i][k] = CPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}
