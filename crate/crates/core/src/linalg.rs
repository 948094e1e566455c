//! Dense row-major linear algebra for the small systems used here.

use alloc::vec::Vec;

use crate::math::{abs, sqrt};

/// Lower Cholesky factor of a symmetric positive definite matrix.
#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factor `a` (n×n, row-major). Returns `None` on a non-positive pivot.
    pub fn factor(n: usize, a: &[f64]) -> Option<Self> {
        assert_eq!(a.len(), n * n);
        let mut l = alloc::vec![0.0; n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) {
                return None;
            }
            let ljj = sqrt(d);
            l[j * n + j] = ljj;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        Some(Cholesky { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `det(A) = Π L_ii²`.
    pub fn det(&self) -> f64 {
        let mut d = 1.0;
        for i in 0..self.n {
            let v = self.l[i * self.n + i];
            d *= v * v;
        }
        d
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }
}

/// Determinant of a general square matrix by LU with partial pivoting.
pub fn lu_det(n: usize, a: &[f64]) -> f64 {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut det = 1.0;
    for j in 0..n {
        let mut p = j;
        let mut best = abs(m[j * n + j]);
        for i in j + 1..n {
            let v = abs(m[i * n + j]);
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if p != j {
            for k in 0..n {
                m.swap(j * n + k, p * n + k);
            }
            det = -det;
        }
        let piv = m[j * n + j];
        det *= piv;
        for i in j + 1..n {
            let f = m[i * n + j] / piv;
            if f != 0.0 {
                for k in j + 1..n {
                    m[i * n + k] -= f * m[j * n + k];
                }
            }
        }
    }
    det
}

/// Singular values of an `rows × cols` matrix (one-sided Jacobi), descending.
pub fn singular_values(rows: usize, cols: usize, a: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), rows * cols);
    // Work on columns of A.
    let mut c: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[i * cols + j]).collect())
        .collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    alpha += c[p][i] * c[p][i];
                    beta += c[q][i] * c[q][i];
                    gamma += c[p][i] * c[q][i];
                }
                if gamma == 0.0 || abs(gamma) <= 1e-15 * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (abs(zeta) + sqrt(1.0 + zeta * zeta));
                let cs = 1.0 / sqrt(1.0 + t * t);
                let sn = cs * t;
                for i in 0..rows {
                    let x = c[p][i];
                    let y = c[q][i];
                    c[p][i] = cs * x - sn * y;
                    c[q][i] = sn * x + cs * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = c
        .iter()
        .map(|col| sqrt(col.iter().map(|v| v * v).sum()))
        .collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_and_determinant() {
        let a = [4.0, 2.0, 0.4, 2.0, 5.0, 1.0, 0.4, 1.0, 3.0];
        let ch = Cholesky::factor(3, &a).unwrap();
        assert!((ch.det() - lu_det(3, &a)).abs() < 1e-12);
        let mut b = [1.0, -2.0, 0.5];
        ch.solve_in_place(&mut b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|k| a[i * 3 + k] * b[k]).sum();
            assert!((r - [1.0, -2.0, 0.5][i]).abs() < 1e-14);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(Cholesky::factor(2, &[1.0, 2.0, 2.0, 1.0]).is_none());
    }

    #[test]
    fn lu_det_with_pivoting() {
        let a = [0.0, 1.0, 2.0, 1.0, 0.0, 3.0, 4.0, -3.0, 8.0];
        assert!((lu_det(3, &a) - (-2.0)).abs() < 1e-13);
        assert_eq!(lu_det(2, &[1.0, 2.0, 2.0, 4.0]), 0.0);
    }

    #[test]
    fn singular_values_of_rank_two() {
        // Outer products u1 v1ᵀ + u2 v2ᵀ with orthogonal factors.
        let u1 = [1.0, 0.0, 0.0];
        let u2 = [0.0, 0.6, 0.8];
        let mut a = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                a[i * 3 + j] = 5.0 * u1[i] * u1[j] + 2.0 * u2[i] * u2[j];
            }
        }
        let s = singular_values(3, 3, &a);
        assert!((s[0] - 5.0).abs() < 1e-14);
        assert!((s[1] - 2.0).abs() < 1e-14);
        assert!(s[2] < 1e-15);
    }
}
