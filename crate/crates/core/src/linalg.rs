//! Dense square matrices, just enough for forms and linear homotheties.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidValue("matrix dimension must be >= 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidValue("matrix entries must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![T::one(); n])
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        let mut data = vec![T::zero(); n * n];
        for (i, v) in d.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self { n, data }
    }

    /// Plane rotation by `theta` radians.
    pub fn rotation2(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Self { n: 2, data: vec![c, -s, s, c] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn row_major(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        Self { n, data }
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok((0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(x).fold(T::zero(), |acc, (a, b)| acc + *a * *b))
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Determinant by partial-pivot elimination.
    pub fn det(&self) -> T {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot =
                (col..n).max_by(|&r1, &r2| a[r1 * n + col].abs().partial_cmp(&a[r2 * n + col].abs()).unwrap()).unwrap();
            if a[pivot * n + col] == T::zero() {
                return T::zero();
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// Fails with [`Error::SingularMatrix`] when `|det| <= 1e-12 * max|a_ij|^n`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let scale = self.max_abs();
        if scale == T::zero() || self.det().abs() <= T::lit(1e-12) * scale.powi(n as i32) {
            return Err(Error::SingularMatrix);
        }
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let pivot =
                (col..n).max_by(|&r1, &r2| a[r1 * n + col].abs().partial_cmp(&a[r2 * n + col].abs()).unwrap()).unwrap();
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= p;
                inv[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let (av, iv) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= f * av;
                    inv[r * n + j] -= f * iv;
                }
            }
        }
        Ok(Self { n, data: inv })
    }

    /// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
    ///
    /// Only the upper triangle is read.
    pub fn symmetric_eigenvalues(&self) -> Vec<T> {
        let n = self.n;
        let mut a = self.data.clone();
        for i in 0..n {
            for j in 0..i {
                a[i * n + j] = a[j * n + i];
            }
        }
        let eps = T::epsilon();
        for _sweep in 0..100 {
            let off = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .fold(T::zero(), |acc, (i, j)| acc + a[i * n + j] * a[i * n + j]);
            let diag = (0..n).fold(T::zero(), |acc, i| acc + a[i * n + i] * a[i * n + i]);
            if off <= eps * eps * diag || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == T::zero() {
                        continue;
                    }
                    let two = T::lit(2.0);
                    let theta = (a[q * n + q] - a[p * n + p]) / (two * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k * n + p], a[k * n + q]);
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_diagonal() {
        let m = Matrix::diagonal(&[2.0, 4.0]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.row_major(), &[0.5, 0.0, 0.0, 0.25]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_row_major(3, vec![2.0, 1.0, 0.5, -1.0, 3.0, 0.0, 0.2, 0.1, 1.5]).unwrap();
        let p = m.mul(&m.inverse().unwrap()).unwrap();
        let id = Matrix::<f64>::identity(3);
        for (a, b) in p.row_major().iter().zip(id.row_major()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_rejected() {
        let m = Matrix::from_row_major(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert_eq!(m.det(), 0.0);
        assert_eq!(m.inverse().unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn jacobi_eigenvalues() {
        let m = Matrix::from_row_major(2, vec![0.0f64, 0.5, 0.5, 0.0]).unwrap();
        let ev = m.symmetric_eigenvalues();
        assert!((ev[0] + 0.5).abs() < 1e-15 && (ev[1] - 0.5).abs() < 1e-15);

        // trace and determinant are preserved
        let m = Matrix::from_row_major(3, vec![4.0, 1.0, 2.0, 1.0, 3.0, 0.5, 2.0, 0.5, 5.0]).unwrap();
        let ev = m.symmetric_eigenvalues();
        let tr: f64 = ev.iter().sum();
        let prod: f64 = ev.iter().product();
        assert!((tr - 12.0).abs() < 1e-12);
        assert!((prod - m.det()).abs() < 1e-10);
    }

    #[test]
    fn rotation_determinant() {
        let r = Matrix::rotation2(0.3f64);
        assert!((r.det() - 1.0).abs() < 1e-15);
    }
}
