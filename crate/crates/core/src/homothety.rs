//! Homothetic maps `ℓ` of `R^k ∪ {∞}`: bijections with `ℓ(zx) = zℓ(x)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sampling::{sweep, uniform, Budget, Sample, SamplingBox, WorstCase};
use crate::scalar::Real;
use crate::space::{chordal_distance, Point};

/// A homothetic function.
///
/// `Circle` and `Astroid` are the two planar examples that conjugate the
/// rational solutions into `pvz6` and `pvz7`. `Circle` sends the punctured
/// coordinate axes to `∞` and is therefore not a bijection.
#[derive(Debug, Clone, PartialEq)]
pub enum Homothety<T> {
    Linear {
        matrix: Matrix<T>,
        inverse: Matrix<T>,
    },
    Scalar(T),
    Circle,
    Astroid,
    /// `[h1, h2, …, hn]` is `h1 ∘ h2 ∘ … ∘ hn` (the last one is applied first).
    Compose(Vec<Homothety<T>>),
    Inverse(Box<Homothety<T>>),
}

/// Real cube root with the sign convention `x^(1/3) = sgn(x)|x|^(1/3)`.
pub fn signed_cuberoot<T: Real>(x: T) -> T {
    x.cbrt()
}

fn planar<T: Real>(p: &Point<T>) -> Result<Option<(T, T)>> {
    match p {
        Point::Infinity => Ok(None),
        Point::Finite(x) if x.len() == 2 => Ok(Some((x[0], x[1]))),
        Point::Finite(x) => Err(Error::UnsupportedDimension { required: 2, found: x.len() }),
    }
}

impl<T: Real> Homothety<T> {
    pub fn linear(matrix: Matrix<T>) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(Homothety::Linear { matrix, inverse })
    }

    pub fn scalar(c: T) -> Result<Self> {
        if c == T::zero() || !c.is_finite() {
            return Err(Error::InvalidValue(format!("scalar homothety needs a finite nonzero factor, got {c}")));
        }
        Ok(Homothety::Scalar(c))
    }

    pub fn inverse_of(self) -> Self {
        match self {
            Homothety::Inverse(inner) => *inner,
            other => Homothety::Inverse(Box::new(other)),
        }
    }

    /// Dimension the map is restricted to, if any.
    pub fn required_dim(&self) -> Option<usize> {
        match self {
            Homothety::Linear { matrix, .. } => Some(matrix.dim()),
            Homothety::Scalar(_) => None,
            Homothety::Circle | Homothety::Astroid => Some(2),
            Homothety::Compose(hs) => hs.iter().find_map(Homothety::required_dim),
            Homothety::Inverse(h) => h.required_dim(),
        }
    }

    pub fn apply(&self, p: &Point<T>) -> Result<Point<T>> {
        match self {
            Homothety::Linear { matrix, .. } => linear_map(matrix, p),
            Homothety::Scalar(c) => p.scaled(*c),
            Homothety::Circle => {
                let Some((x, y)) = planar(p)? else { return Ok(Point::Infinity) };
                if x == T::zero() && y == T::zero() {
                    return Ok(p.clone());
                }
                if x == T::zero() || y == T::zero() {
                    return Ok(Point::Infinity);
                }
                let r2 = x * x + y * y;
                Ok(Point::from_raw(vec![r2 / y, r2 / x]))
            }
            Homothety::Astroid => {
                let Some((x, y)) = planar(p)? else { return Ok(Point::Infinity) };
                if x == T::zero() && y == T::zero() {
                    return Ok(p.clone());
                }
                let r2 = x * x + y * y;
                Ok(Point::from_raw(vec![x * (x * x / r2), y * (y * y / r2)]))
            }
            Homothety::Compose(hs) => hs.iter().rev().try_fold(p.clone(), |acc, h| h.apply(&acc)),
            Homothety::Inverse(h) => h.apply_inverse(p),
        }
    }

    pub fn apply_inverse(&self, p: &Point<T>) -> Result<Point<T>> {
        match self {
            Homothety::Linear { inverse, .. } => linear_map(inverse, p),
            Homothety::Scalar(c) => p.scaled(T::one() / *c),
            Homothety::Circle => {
                let Some((x, y)) = planar(p)? else { return Ok(Point::Infinity) };
                if x == T::zero() && y == T::zero() {
                    return Ok(p.clone());
                }
                let r2 = x * x + y * y;
                Ok(Point::from_raw(vec![x * (x * y / r2), y * (x * y / r2)]))
            }
            Homothety::Astroid => {
                let Some((x, y)) = planar(p)? else { return Ok(Point::Infinity) };
                let (cx, cy) = (signed_cuberoot(x), signed_cuberoot(y));
                // (x y²)^(1/3) = x^(1/3) (y^(1/3))²
                Ok(Point::from_raw(vec![x + cx * cy * cy, y + cx * cx * cy]))
            }
            Homothety::Compose(hs) => hs.iter().try_fold(p.clone(), |acc, h| h.apply_inverse(&acc)),
            Homothety::Inverse(h) => h.apply(p),
        }
    }

    /// Chordal distance from `p` to the set where the map is not a
    /// homeomorphism (the punctured axes for `Circle`); `2` when there is none.
    pub fn excluded_distance(&self, p: &Point<T>) -> T {
        let two = T::lit(2.0);
        match self {
            Homothety::Circle => match p {
                Point::Finite(x) if x.len() == 2 => {
                    let dx = chordal_distance(p, &Point::Finite(vec![T::zero(), x[1]])).unwrap_or(two);
                    let dy = chordal_distance(p, &Point::Finite(vec![x[0], T::zero()])).unwrap_or(two);
                    dx.min(dy)
                }
                _ => two,
            },
            Homothety::Compose(hs) => {
                // distance measured at each stage's input
                let mut d = two;
                let mut q = p.clone();
                for h in hs.iter().rev() {
                    d = d.min(h.excluded_distance(&q));
                    match h.apply(&q) {
                        Ok(next) => q = next,
                        Err(_) => return T::zero(),
                    }
                }
                d
            }
            Homothety::Inverse(h) => h.excluded_distance(p),
            _ => two,
        }
    }
}

fn linear_map<T: Real>(m: &Matrix<T>, p: &Point<T>) -> Result<Point<T>> {
    match p {
        Point::Infinity => Ok(Point::Infinity),
        Point::Finite(x) => Ok(Point::from_raw(m.mul_vec(x)?)),
    }
}

/// Largest chordal defect of `ℓ(zx) = zℓ(x)` over seeded samples.
///
/// `x` is uniform in `[-3,3]^k`, `z` uniform in `[-3,3]`; draws within
/// `1e-3` chordal of the map's excluded set are skipped.
pub fn check_homogeneity<T: Real>(h: &Homothety<T>, k: usize, n_samples: usize, seed: u64) -> Result<T> {
    if let Some(d) = h.required_dim() {
        if d != k {
            return Err(Error::UnsupportedDimension { required: d, found: k });
        }
    }
    let bx = SamplingBox::<T>::default();
    let delta = T::lit(1e-3);
    let report = sweep(seed, Budget::Requested(n_samples), |rng| {
        let x = bx.point(rng, k);
        let z = uniform(rng, T::lit(-3.0), T::lit(3.0));
        let zx = x.scaled(z)?;
        if h.excluded_distance(&x) < delta || h.excluded_distance(&zx) < delta {
            return Ok(Sample::Excluded);
        }
        let lhs = h.apply(&zx)?;
        let rhs = h.apply(&x)?.scaled(z)?;
        Ok(Sample::Residual { value: chordal_distance(&lhs, &rhs)?, worst: WorstCase::new(x, vec![z]) })
    })?;
    Ok(report.max_residual)
}

impl<T: Real> fmt::Display for Homothety<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homothety::Linear { matrix, .. } => {
                let s: Vec<String> = matrix.row_major().iter().map(|v| v.to_string()).collect();
                write!(f, "linear {}", s.join(","))
            }
            Homothety::Scalar(c) => write!(f, "scalar {c}"),
            Homothety::Circle => f.write_str("circle"),
            Homothety::Astroid => f.write_str("astroid"),
            Homothety::Compose(hs) => {
                f.write_str("compose(")?;
                for (i, h) in hs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{h}")?;
                }
                f.write_str(")")
            }
            Homothety::Inverse(h) => write!(f, "inv({h})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::finite(c.to_vec()).unwrap()
    }

    fn close(a: &Point<f64>, b: &Point<f64>, tol: f64) -> bool {
        chordal_distance(a, b).unwrap() <= tol
    }

    #[test]
    fn apply_examples() {
        assert_eq!(Homothety::Circle.apply(&pt(&[1.0, 1.0])).unwrap(), pt(&[2.0, 2.0]));
        assert_eq!(Homothety::Astroid.apply(&pt(&[1.0, 1.0])).unwrap(), pt(&[0.5, 0.5]));
        assert_eq!(Homothety::scalar(2.0).unwrap().apply(&pt(&[1.0, -1.0])).unwrap(), pt(&[2.0, -2.0]));
    }

    #[test]
    fn apply_inverse_examples() {
        assert_eq!(Homothety::Circle.apply_inverse(&pt(&[2.0, 2.0])).unwrap(), pt(&[1.0, 1.0]));
        assert!(close(&Homothety::Astroid.apply_inverse(&pt(&[0.5, 0.5])).unwrap(), &pt(&[1.0, 1.0]), 1e-15));
        let m = Matrix::from_row_major(2, vec![2.0, 1.0, -1.0, 3.0]).unwrap();
        let h = Homothety::linear(m.clone()).unwrap();
        let x = [0.7, -1.3];
        let mx = pt(&m.mul_vec(&x).unwrap());
        let back = h.apply_inverse(&mx).unwrap();
        let b = back.coords().unwrap();
        assert!((b[0] - x[0]).abs() < 1e-12 && (b[1] - x[1]).abs() < 1e-12);
    }

    #[test]
    fn signed_cuberoot_examples() {
        assert_eq!(signed_cuberoot(8.0f64), 2.0);
        assert_eq!(signed_cuberoot(-8.0f64), -2.0);
        assert_eq!(signed_cuberoot(0.0f64), 0.0);
        for x in [1e-9f64, 0.37, 5.0, 1234.5] {
            let r = signed_cuberoot(-x);
            assert!(((r * r * r) + x).abs() <= 1e-14 * x);
        }
    }

    #[test]
    fn zero_and_infinity_are_fixed() {
        let hs = [
            Homothety::Circle,
            Homothety::Astroid,
            Homothety::scalar(-2.5).unwrap(),
            Homothety::linear(Matrix::rotation2(0.4)).unwrap(),
            Homothety::Compose(vec![Homothety::Astroid, Homothety::Circle]),
            Homothety::Inverse(Box::new(Homothety::Astroid)),
        ];
        for h in &hs {
            assert!(h.apply(&Point::origin(2)).unwrap().is_origin(), "{h}");
            assert!(h.apply(&Point::Infinity).unwrap().is_infinity(), "{h}");
            assert!(h.apply_inverse(&Point::origin(2)).unwrap().is_origin(), "{h}");
            assert!(h.apply_inverse(&Point::Infinity).unwrap().is_infinity(), "{h}");
        }
    }

    #[test]
    fn circle_sends_axes_to_infinity() {
        assert!(Homothety::Circle.apply(&pt(&[0.0, 2.0])).unwrap().is_infinity());
        assert!(Homothety::Circle.apply(&pt(&[-1.0, 0.0])).unwrap().is_infinity());
    }

    #[test]
    fn planar_maps_reject_other_dimensions() {
        assert_eq!(
            Homothety::Circle.apply(&pt(&[1.0, 2.0, 3.0])).unwrap_err(),
            Error::UnsupportedDimension { required: 2, found: 3 }
        );
        assert!(check_homogeneity(&Homothety::<f64>::Astroid, 3, 10, 0).is_err());
    }

    #[test]
    fn homogeneity_examples() {
        assert!(check_homogeneity(&Homothety::scalar(3.0).unwrap(), 2, 500, 0).unwrap() <= 1e-14);
        assert!(check_homogeneity(&Homothety::<f64>::Circle, 2, 500, 1).unwrap() <= 1e-10);
        assert!(check_homogeneity(&Homothety::<f64>::Astroid, 2, 500, 2).unwrap() <= 1e-10);
    }

    #[test]
    fn compose_applies_right_to_left() {
        let h = Homothety::Compose(vec![Homothety::scalar(2.0).unwrap(), Homothety::Circle]);
        // circle first: (1,1) -> (2,2), then doubled
        assert_eq!(h.apply(&pt(&[1.0, 1.0])).unwrap(), pt(&[4.0, 4.0]));
        assert_eq!(h.apply_inverse(&pt(&[4.0, 4.0])).unwrap(), pt(&[1.0, 1.0]));
    }
}
