//! Quadratic forms `Q`, their polar bilinear forms `B`, and linear forms `L`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{dot, norm, Real};

/// `Q(x) = xᵀ A x` with `A` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm<T> {
    matrix: Matrix<T>,
    positive_definite: bool,
}

impl<T: Real> QuadraticForm<T> {
    /// Builds the form of `(M + Mᵀ)/2`, so the stored matrix is exactly symmetric.
    pub fn new(m: Matrix<T>) -> Self {
        let n = m.dim();
        let half = T::lit(0.5);
        let data = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| if i == j { m.get(i, i) } else { half * (m.get(i, j) + m.get(j, i)) })
            .collect();
        let matrix = Matrix::from_row_major(n, data).expect("symmetrized matrix is valid");
        let positive_definite = Self::pd_test(&matrix);
        Self { matrix, positive_definite }
    }

    /// Form from the `k(k+1)/2` upper-triangle matrix entries in row-major order.
    ///
    /// For `k = 2` the list `q11,q12,q22` gives `Q(x,y) = q11 x² + 2 q12 xy + q22 y²`.
    pub fn from_upper_triangle(k: usize, coeffs: &[T]) -> Result<Self> {
        let expected = k * (k + 1) / 2;
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coeffs.len() });
        }
        let mut data = vec![T::zero(); k * k];
        let mut it = coeffs.iter();
        for i in 0..k {
            for j in i..k {
                let v = *it.next().unwrap();
                data[i * k + j] = v;
                data[j * k + i] = v;
            }
        }
        Ok(Self::new(Matrix::from_row_major(k, data)?))
    }

    /// Inverse of [`from_upper_triangle`](Self::from_upper_triangle).
    pub fn upper_triangle(&self) -> Vec<T> {
        let k = self.dim();
        (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).map(|(i, j)| self.matrix.get(i, j)).collect()
    }

    /// The sum of squares `Σ x_i²`.
    pub fn identity(k: usize) -> Self {
        Self::new(Matrix::identity(k))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    fn check(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }

    pub fn eval_q(&self, x: &[T]) -> Result<T> {
        self.check(x)?;
        Ok(dot(x, &self.matrix.mul_vec(x)?))
    }

    /// Polar form `B(x,y) = Q(x+y) - Q(x) - Q(y)`, evaluated as `2 xᵀ A y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> Result<T> {
        self.check(x)?;
        self.check(y)?;
        Ok(T::lit(2.0) * dot(x, &self.matrix.mul_vec(y)?))
    }

    /// Smallest eigenvalue exceeds `1e-12` times the largest absolute one.
    pub fn is_positive_definite(&self) -> bool {
        self.positive_definite
    }

    fn pd_test(m: &Matrix<T>) -> bool {
        let ev = m.symmetric_eigenvalues();
        let largest = ev.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
        largest > T::zero() && ev[0] > T::lit(1e-12) * largest
    }

    /// `c·Q`.
    pub fn scaled(&self, c: T) -> Self {
        let data = self.matrix.row_major().iter().map(|v| *v * c).collect();
        Self::new(Matrix::from_row_major(self.dim(), data).expect("scaled matrix"))
    }

    /// The composite `Q∘M`, i.e. the form of `MᵀAM`.
    pub fn pullback(&self, m: &Matrix<T>) -> Result<Self> {
        let inner = self.matrix.mul(m)?;
        Ok(Self::new(m.transpose().mul(&inner)?))
    }
}

/// `L(x) = Σ c_i x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm<T> {
    coeffs: Vec<T>,
}

impl<T: Real> LinearForm<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidValue("linear form needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidValue("linear form coefficients must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm(&self) -> T {
        norm(&self.coeffs)
    }

    pub fn eval_l(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(dot(&self.coeffs, x))
    }

    /// `L∘M`.
    pub fn pullback(&self, m: &Matrix<T>) -> Result<Self> {
        Self::new(m.transpose().mul_vec(&self.coeffs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_form() -> QuadraticForm<f64> {
        QuadraticForm::from_upper_triangle(2, &[0.0, 0.5, 0.0]).unwrap()
    }

    #[test]
    fn eval_q_examples() {
        let id = QuadraticForm::<f64>::identity(2);
        assert_eq!(id.eval_q(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(id.eval_q(&[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(xy_form().eval_q(&[2.0, 3.0]).unwrap(), 6.0);
        assert!(matches!(id.eval_q(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn bilinear_examples() {
        let id = QuadraticForm::<f64>::identity(2);
        assert_eq!(id.bilinear(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(id.bilinear(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 2.0);
        assert_eq!(xy_form().bilinear(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn positive_definite_examples() {
        assert!(QuadraticForm::<f64>::identity(2).is_positive_definite());
        assert!(!xy_form().is_positive_definite());
        assert!(!QuadraticForm::<f64>::from_upper_triangle(2, &[0.0, 0.0, 0.0]).unwrap().is_positive_definite());
        // positive semidefinite is not definite
        assert!(!QuadraticForm::<f64>::from_upper_triangle(2, &[1.0, 1.0, 1.0]).unwrap().is_positive_definite());
    }

    #[test]
    fn eval_l_examples() {
        let l = LinearForm::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(l.eval_l(&[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(l.eval_l(&[2.0, 0.0]).unwrap(), 2.0);
        assert_eq!(LinearForm::new(vec![1.0, 1.0]).unwrap().eval_l(&[3.0, 4.0]).unwrap(), 7.0);
        assert!(LinearForm::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn construction_symmetrizes() {
        let m = Matrix::from_row_major(2, vec![1.0, 2.0, 0.0, 3.0]).unwrap();
        let q = QuadraticForm::new(m);
        assert_eq!(q.matrix().get(0, 1), q.matrix().get(1, 0));
        assert_eq!(q.upper_triangle(), vec![1.0, 1.0, 3.0]);
    }
}
