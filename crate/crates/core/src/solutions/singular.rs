//! Declared singular sets: where a solution evaluates to `∞` or fails to be
//! continuous. Used to keep sampled checks away from poles.

use std::fmt;

use crate::forms::QuadraticForm;
use crate::scalar::{dot, norm, Real};
use crate::space::{chordal_distance, Point};

/// One component of a singular set.
#[derive(Debug, Clone, PartialEq)]
pub enum SingularPiece<T> {
    Point(Point<T>),
    /// The hyperplane `normal·x + offset = 0` (its closure contains `∞`).
    Affine {
        normal: Vec<T>,
        offset: T,
    },
    /// The cone `Q(x - center) = 0` of an indefinite form (closure contains `∞`).
    Quadric {
        form: QuadraticForm<T>,
        center: Vec<T>,
    },
    /// The planar cubic `x_axis³ + x² + y² = 0`.
    Cubic {
        axis: usize,
    },
}

/// Union of [`SingularPiece`]s.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingularSet<T> {
    pub pieces: Vec<SingularPiece<T>>,
}

impl<T: Real> SingularSet<T> {
    pub fn empty() -> Self {
        Self { pieces: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn with(mut self, piece: SingularPiece<T>) -> Self {
        self.pieces.push(piece);
        self
    }

    /// Approximate chordal distance from `p` to the set; `2` (the diameter)
    /// when the set is empty.
    pub fn distance(&self, p: &Point<T>) -> T {
        self.pieces.iter().map(|s| s.distance(p)).fold(T::lit(2.0), T::min)
    }
}

/// Chordal distance from `x` to the first-order projection onto `{g = 0}`.
fn level_set_distance<T: Real>(x: &[T], g: T, grad: &[T]) -> T {
    if g == T::zero() {
        return T::zero();
    }
    let gg = dot(grad, grad);
    if gg == T::zero() {
        return T::lit(2.0);
    }
    let step = g / gg;
    let proj: Vec<T> = x.iter().zip(grad).map(|(xi, gi)| *xi - step * *gi).collect();
    let p = Point::from_raw(x.to_vec());
    chordal_distance(&p, &Point::from_raw(proj)).unwrap_or(T::zero())
}

impl<T: Real> SingularPiece<T> {
    pub fn distance(&self, p: &Point<T>) -> T {
        let x = match p {
            Point::Infinity => {
                return match self {
                    SingularPiece::Point(q) => chordal_distance(p, q).unwrap_or(T::zero()),
                    SingularPiece::Quadric { form, .. } if form.is_positive_definite() => T::lit(2.0),
                    // unbounded sets all pass through ∞
                    _ => T::zero(),
                };
            }
            Point::Finite(x) => x,
        };
        match self {
            SingularPiece::Point(q) => chordal_distance(p, q).unwrap_or(T::zero()),
            SingularPiece::Affine { normal, offset } => {
                if normal.len() != x.len() {
                    return T::zero();
                }
                level_set_distance(x, dot(normal, x) + *offset, normal)
            }
            SingularPiece::Quadric { form, center } => {
                if center.len() != x.len() {
                    return T::zero();
                }
                let shifted: Vec<T> = x.iter().zip(center).map(|(a, c)| *a - *c).collect();
                let g = form.eval_q(&shifted).unwrap_or(T::zero());
                let grad: Vec<T> = form
                    .matrix()
                    .mul_vec(&shifted)
                    .map(|v| v.into_iter().map(|c| c * T::lit(2.0)).collect())
                    .unwrap_or_default();
                level_set_distance(x, g, &grad)
            }
            SingularPiece::Cubic { axis } => {
                if x.len() != 2 {
                    return T::zero();
                }
                let (i, j) = (*axis, 1 - *axis);
                let (u, v) = (x[i], x[j]);
                let g = u * u * u + u * u + v * v;
                let mut grad = vec![T::zero(); 2];
                grad[i] = T::lit(3.0) * u * u + T::lit(2.0) * u;
                grad[j] = T::lit(2.0) * v;
                if norm(&grad) == T::zero() {
                    // only the origin is critical on this curve
                    return chordal_distance(p, &Point::origin(2)).unwrap_or(T::zero());
                }
                level_set_distance(x, g, &grad)
            }
        }
    }
}

impl<T: Real> fmt::Display for SingularPiece<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularPiece::Point(p) => write!(f, "{{{p}}}"),
            SingularPiece::Affine { normal, offset } => {
                let n: Vec<String> = normal.iter().map(|v| v.to_string()).collect();
                write!(f, "line ({})·x + {} = 0", n.join(","), offset)
            }
            SingularPiece::Quadric { form, center } => {
                let q: Vec<String> = form.upper_triangle().iter().map(|v| v.to_string()).collect();
                let c: Vec<String> = center.iter().map(|v| v.to_string()).collect();
                write!(f, "cone Q(x - ({})) = 0 with Q={}", c.join(","), q.join(","))
            }
            SingularPiece::Cubic { axis: 0 } => f.write_str("curve x^3 + x^2 + y^2 = 0"),
            SingularPiece::Cubic { .. } => f.write_str("curve y^3 + x^2 + y^2 = 0"),
        }
    }
}

impl<T: Real> fmt::Display for SingularSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("none");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::finite(c.to_vec()).unwrap()
    }

    #[test]
    fn affine_distance_is_chordal_to_foot() {
        let line = SingularPiece::Affine { normal: vec![1.0, 0.0], offset: 1.0 };
        let d = line.distance(&pt(&[0.0, 0.0]));
        let expected = chordal_distance(&pt(&[0.0, 0.0]), &pt(&[-1.0, 0.0])).unwrap();
        assert!((d - expected).abs() < 1e-15);
        assert_eq!(line.distance(&pt(&[-1.0, 5.0])), 0.0);
        assert_eq!(line.distance(&Point::Infinity), 0.0);
    }

    #[test]
    fn cubic_contains_its_points() {
        // x = -2: -8 + 4 + y² = 0 -> y = 2
        let c = SingularPiece::Cubic { axis: 0 };
        assert_eq!(c.distance(&pt(&[-2.0, 2.0])), 0.0);
        assert!(c.distance(&pt(&[-2.0, 2.001])) < 1e-3);
        assert!(c.distance(&pt(&[1.0, 1.0])) > 0.1);
    }

    #[test]
    fn empty_set_is_far() {
        assert_eq!(SingularSet::<f64>::empty().distance(&pt(&[1.0])), 2.0);
    }
}
