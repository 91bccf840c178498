//! Small dense linear algebra: complex determinants and symmetric eigenvalues.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // math methods come from here when std is absent
use num_traits::Float;
use num_traits::Zero;

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&a, &b| m[a][k].norm().total_cmp(&m[b][k].norm()))
            .expect("nonempty range");
        if m[pivot][k].is_zero() {
            return Complex64::zero();
        }
        if pivot != k {
            m.swap(pivot, k);
            det = -det;
        }
        let p = m[k][k];
        det *= p;
        for i in k + 1..n {
            let f = m[i][k] / p;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    det
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending.
pub(crate) fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let total: f64 = a.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-30 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian matrix, ascending. Uses the real embedding
/// `[[A, -B], [B, A]]`, whose spectrum is that of `A + iB` with each value
/// doubled; every other value is kept.
pub(crate) fn hermitian_eigenvalues(h: &[Vec<Complex64>]) -> Vec<f64> {
    let n = h.len();
    let mut m = alloc::vec![alloc::vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = h[i][j];
            m[i][j] = z.re;
            m[i + n][j + n] = z.re;
            m[i][j + n] = -z.im;
            m[i + n][j] = z.im;
        }
    }
    symmetric_eigenvalues(m).into_iter().step_by(2).collect()
}
