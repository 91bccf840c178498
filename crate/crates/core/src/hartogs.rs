//! The exhaustion function `rho_alpha` of the unit polydisk, its Levi form,
//! and membership in Hartogs figures.
//!
//! Points of `C^n` split as `w = (w1, w2)` with `w1` the first `n - q`
//! coordinates. Levi matrices are normalized as `2 d^2/(dz_j dzbar_k)`, so
//! that `-|w1|^2` contributes the block `-2 Id`.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // math methods come from here when std is absent
use num_traits::Float;

use crate::linalg;

/// Finite-difference step for [`levi_matrix_fd`].
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HartogsError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("point has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("rho is not twice differentiable where w2 = 0 for non-integer alpha")]
    NotSmooth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HartogsParams {
    pub n: usize,
    pub q: usize,
    pub r: f64,
    pub alpha: f64,
}

impl HartogsParams {
    pub fn new(n: usize, q: usize, r: f64, alpha: f64) -> Result<Self, HartogsError> {
        if !(2 <= q && q < n) {
            return Err(HartogsError::BadParams(alloc::format!(
                "need 2 <= q < n, got n = {n}, q = {q}"
            )));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(HartogsError::BadParams(alloc::format!("need 0 < r < 1, got {r}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(HartogsError::BadParams(alloc::format!("need alpha > 0, got {alpha}")));
        }
        Ok(HartogsParams { n, q, r, alpha })
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self, HartogsError> {
        Self::new(self.n, self.q, self.r, alpha)
    }

    /// Number of coordinates in `w1`.
    pub fn outer(&self) -> usize {
        self.n - self.q
    }

    fn check(&self, w: &[Complex64]) -> Result<(), HartogsError> {
        if w.len() != self.n {
            return Err(HartogsError::Dimension {
                expected: self.n,
                got: w.len(),
            });
        }
        Ok(())
    }
}

fn norm_sqr(w: &[Complex64]) -> f64 {
    w.iter().map(|z| z.norm_sqr()).sum()
}

/// `-|w1|^2 + r^2/4 + (1 - r^2/4) |w2|^(2 alpha)`, Euclidean norms.
pub fn rho_alpha(w: &[Complex64], p: &HartogsParams) -> Result<f64, HartogsError> {
    p.check(w)?;
    let (w1, w2) = w.split_at(p.outer());
    let c = 1.0 - p.r * p.r / 4.0;
    Ok(-norm_sqr(w1) + p.r * p.r / 4.0 + c * norm_sqr(w2).powf(p.alpha))
}

fn is_integer(x: f64) -> bool {
    x.fract() == 0.0
}

/// Levi matrix from the closed-form blocks: `-2 Id` on `w1`, and on `w2`
/// `(1 - r^2/4) 2 alpha s^(alpha-1) (delta_jk + (alpha-1) zbar_j z_k / s)`
/// with `s = |w2|^2`.
pub fn levi_matrix(w: &[Complex64], p: &HartogsParams) -> Result<Vec<Vec<Complex64>>, HartogsError> {
    p.check(w)?;
    let n = p.n;
    let k = p.outer();
    let a = p.alpha;
    let c = 1.0 - p.r * p.r / 4.0;
    let w2 = &w[k..];
    let s = norm_sqr(w2);
    let mut m = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in m.iter_mut().enumerate().take(k) {
        row[i] = Complex64::new(-2.0, 0.0);
    }
    if s == 0.0 {
        if !is_integer(a) {
            return Err(HartogsError::NotSmooth);
        }
        let diag = if a == 1.0 { 2.0 * c } else { 0.0 };
        for i in k..n {
            m[i][i] = Complex64::new(diag, 0.0);
        }
        return Ok(m);
    }
    let base = 2.0 * c * a * s.powf(a - 1.0);
    for j in 0..p.q {
        for l in 0..p.q {
            let delta = if j == l { 1.0 } else { 0.0 };
            let cross = w2[j].conj() * w2[l] * ((a - 1.0) / s);
            m[k + j][k + l] = (cross + delta) * base;
        }
    }
    Ok(m)
}

/// Levi matrix of [`rho_alpha`] from central differences with step `h`:
/// `d^2/(dz_j dzbar_k) = 1/4 [(d_xj d_xk + d_yj d_yk) + i (d_xj d_yk - d_yj d_xk)]`.
pub fn levi_matrix_fd(
    w: &[Complex64],
    p: &HartogsParams,
    h: f64,
) -> Result<Vec<Vec<Complex64>>, HartogsError> {
    p.check(w)?;
    let n = p.n;
    // Real coordinate 2j is x_j, 2j+1 is y_j.
    let f = |shifts: &[(usize, f64)]| {
        let mut v = w.to_vec();
        for &(idx, d) in shifts {
            let z = &mut v[idx / 2];
            if idx % 2 == 0 {
                z.re += d;
            } else {
                z.im += d;
            }
        }
        rho_alpha(&v, p).expect("dimension checked")
    };
    let second = |a: usize, b: usize| {
        if a == b {
            (f(&[(a, h)]) - 2.0 * f(&[]) + f(&[(a, -h)])) / (h * h)
        } else {
            (f(&[(a, h), (b, h)]) - f(&[(a, h), (b, -h)]) - f(&[(a, -h), (b, h)])
                + f(&[(a, -h), (b, -h)]))
                / (4.0 * h * h)
        }
    };
    let mut m = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for k in 0..n {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            let re = second(xj, xk) + second(yj, yk);
            let im = second(xj, yk) - second(yj, xk);
            // Factor 2 for the normalization, 1/4 from the Wirtinger operators.
            m[j][k] = Complex64::new(re, im) * 0.5;
        }
    }
    Ok(m)
}

/// Largest entry modulus of `a - b` divided by the largest entry of `a`.
pub fn relative_difference(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let diff = a
        .iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Eigenvalues of the closed-form Levi matrix, ascending.
pub fn levi_eigenvalues(w: &[Complex64], p: &HartogsParams) -> Result<Vec<f64>, HartogsError> {
    Ok(linalg::hermitian_eigenvalues(&levi_matrix(w, p)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeviSignature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl LeviSignature {
    pub fn from_eigenvalues(ev: &[f64], tol: f64) -> Self {
        let positive = ev.iter().filter(|&&x| x > tol).count();
        let negative = ev.iter().filter(|&&x| x < -tol).count();
        LeviSignature {
            positive,
            negative,
            zero: ev.len() - positive - negative,
        }
    }
}

pub fn levi_signature(
    w: &[Complex64],
    p: &HartogsParams,
    tol: f64,
) -> Result<LeviSignature, HartogsError> {
    Ok(LeviSignature::from_eigenvalues(&levi_eigenvalues(w, p)?, tol))
}

/// Membership in `D_r^(n-q) x D^q  union  D^(n-q) x (D^q \ closed D_(1-r)^q)`,
/// polydisk norms on each factor.
pub fn in_hartogs_figure(w: &[Complex64], p: &HartogsParams) -> Result<bool, HartogsError> {
    p.check(w)?;
    let (w1, w2) = w.split_at(p.outer());
    let max = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (m1, m2) = (max(w1), max(w2));
    Ok((m1 < p.r && m2 < 1.0) || (m1 < 1.0 && m2 < 1.0 && m2 > 1.0 - p.r))
}

pub fn in_unit_polydisk(w: &[Complex64]) -> bool {
    w.iter().all(|z| z.norm() < 1.0)
}

/// Membership in `D_alpha^+ = { w in D^n : rho_alpha(w) > 0 }`.
pub fn in_d_plus(w: &[Complex64], p: &HartogsParams) -> Result<bool, HartogsError> {
    Ok(in_unit_polydisk(w) && rho_alpha(w, p)? > 0.0)
}

/// Smallest `alpha` for which the bound below guarantees
/// `D_alpha^+ ⊂ H_r^(n, n-q)`, or `None` when the bound gives nothing.
///
/// A point of `D_alpha^+` outside the figure has some `|w1_i| >= r` and all
/// `|w2_j| <= 1 - r`, so `|w2| <= sqrt(q) (1 - r)` and `rho > 0` forces
/// `|w2|^(2 alpha) > (3 r^2 / 4) / (1 - r^2 / 4)`. When `sqrt(q) (1 - r) < 1`
/// this fails for all large `alpha`.
pub fn containment_threshold(n: usize, q: usize, r: f64) -> Result<Option<f64>, HartogsError> {
    HartogsParams::new(n, q, r, 1.0)?;
    let s = (q as f64).sqrt() * (1.0 - r);
    let k = (0.75 * r * r) / (1.0 - r * r / 4.0);
    if s >= 1.0 {
        return Ok(None);
    }
    if k >= 1.0 {
        return Ok(Some(0.0));
    }
    Ok(Some((k.ln() / (2.0 * s.ln())).max(0.0)))
}

/// Whether `w` lies in `A_(r/2, 1)^(n-q) x {0}`, the set left out of the
/// union of the `D_alpha^+`; the annulus uses the Euclidean norm of `w1`.
pub fn in_excluded_set(w: &[Complex64], p: &HartogsParams) -> Result<bool, HartogsError> {
    p.check(w)?;
    let (w1, w2) = w.split_at(p.outer());
    let r1 = norm_sqr(w1).sqrt();
    Ok(norm_sqr(w2) == 0.0 && r1 >= p.r / 2.0 && r1 <= 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| loop {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if z.norm() < 1.0 {
                    break z;
                }
            })
            .collect()
    }

    #[test]
    fn params() {
        assert!(HartogsParams::new(3, 1, 0.5, 1.0).is_err());
        assert!(HartogsParams::new(3, 3, 0.5, 1.0).is_err());
        assert!(HartogsParams::new(3, 2, 1.0, 1.0).is_err());
        assert!(HartogsParams::new(3, 2, 0.5, 0.0).is_err());
        assert!(HartogsParams::new(3, 2, 0.5, 1.0).is_ok());
    }

    #[test]
    fn rho_values() {
        let p = HartogsParams::new(3, 2, 0.5, 1.0).unwrap();
        assert_eq!(rho_alpha(&[c(0.0, 0.0); 3], &p).unwrap(), 0.0625);
        let on = [c(0.25, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(rho_alpha(&on, &p).unwrap().abs() < 1e-15);
        let w = [c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.1)];
        let quad = -(0.01 + 0.04) + 0.0625 + 0.9375 * (0.09 + 0.16 + 0.25 + 0.01);
        assert!((rho_alpha(&w, &p).unwrap() - quad).abs() < 1e-15);
        assert!(rho_alpha(&w[..2], &p).is_err());
    }

    #[test]
    fn levi_blocks() {
        let p = HartogsParams::new(3, 2, 0.5, 1.0).unwrap();
        let w = [c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.1)];
        assert_eq!(
            levi_signature(&w, &p, 1e-9).unwrap(),
            LeviSignature { positive: 2, negative: 1, zero: 0 }
        );
        let p = HartogsParams::new(4, 2, 0.5, 2.0).unwrap();
        let w = [c(0.1, 0.2), c(0.0, 0.3), c(-0.3, 0.4), c(0.5, -0.1)];
        let ev = levi_eigenvalues(&w, &p).unwrap();
        assert!((ev[0] + 2.0).abs() < 1e-12 && (ev[1] + 2.0).abs() < 1e-12);
        assert!(ev[2] > 0.0);
    }

    #[test]
    fn levi_is_hermitian_and_matches_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for &(n, alpha) in &[(3, 1.0), (4, 2.0), (5, 3.5), (3, 0.7)] {
            let p = HartogsParams::new(n, 2, 0.5, alpha).unwrap();
            for _ in 0..50 {
                let w = random_point(&mut rng, n);
                if norm_sqr(&w[n - 2..]) < 1e-2 {
                    continue;
                }
                let m = levi_matrix(&w, &p).unwrap();
                for j in 0..n {
                    for k in 0..n {
                        assert!((m[j][k] - m[k][j].conj()).norm() < 1e-14);
                    }
                }
                let fd = levi_matrix_fd(&w, &p, FD_STEP).unwrap();
                assert!(relative_difference(&m, &fd) < 1e-5);
                let sig = levi_signature(&w, &p, 1e-9).unwrap();
                assert!(sig.positive >= p.q);
            }
        }
    }

    #[test]
    fn origin_of_w2() {
        let w = [c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let p = HartogsParams::new(3, 2, 0.5, 1.5).unwrap();
        assert_eq!(levi_matrix(&w, &p), Err(HartogsError::NotSmooth));
        let p = HartogsParams::new(3, 2, 0.5, 1.0).unwrap();
        assert_eq!(levi_signature(&w, &p, 1e-9).unwrap().positive, 2);
    }

    #[test]
    fn figure_membership() {
        let p = HartogsParams::new(3, 2, 0.5, 1.0).unwrap();
        assert!(in_hartogs_figure(&[c(0.0, 0.0); 3], &p).unwrap());
        let w = [c(0.9, 0.0), c(0.5, 0.0), c(0.0, 0.5)];
        assert!(!in_hartogs_figure(&w, &p).unwrap());
        let w = [c(0.9, 0.0), c(0.6, 0.0), c(0.0, 0.1)];
        assert!(in_hartogs_figure(&w, &p).unwrap());
    }

    #[test]
    fn containment_for_large_alpha() {
        let alpha0 = containment_threshold(3, 2, 0.5).unwrap().unwrap();
        assert!((alpha0 - (0.2f64.ln() / 0.5f64.ln())).abs() < 1e-12);
        assert_eq!(containment_threshold(5, 4, 0.4).unwrap(), None);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = HartogsParams::new(3, 2, 0.5, alpha0 * 1.01).unwrap();
        let mut inside = 0;
        while inside < 2000 {
            let w = random_point(&mut rng, 3);
            if in_d_plus(&w, &p).unwrap() {
                inside += 1;
                assert!(in_hartogs_figure(&w, &p).unwrap());
            }
        }
    }

    #[test]
    fn union_covers_the_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = HartogsParams::new(3, 2, 0.5, 1.0).unwrap();
        for _ in 0..300 {
            let w = random_point(&mut rng, 3);
            assert!(!in_excluded_set(&w, &p).unwrap());
            let hit = (-40..=10).any(|k| {
                let q = p.with_alpha(2f64.powi(k)).unwrap();
                rho_alpha(&w, &q).unwrap() > 0.0
            });
            assert!(hit, "{w:?}");
        }
    }
}
