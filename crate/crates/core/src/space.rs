//! The one-point compactification of `R^k` and of `R`, with the chordal
//! metric inherited from the unit sphere `S^k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{norm, Real};

/// A point of `R^k ∪ {∞}`.
///
/// Finite coordinates never contain NaN or infinite components; arithmetic
/// that overflows collapses to [`Point::Infinity`].
#[derive(Debug, Clone, PartialEq)]
pub enum Point<T> {
    Finite(Vec<T>),
    Infinity,
}

/// An element of `R ∪ {∞}`; the flow parameter `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtScalar<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> Point<T> {
    /// Validated finite point.
    pub fn finite(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidValue("points need at least one coordinate".into()));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidValue(format!("non-finite coordinate {c}")));
        }
        Ok(Point::Finite(coords))
    }

    /// Builds a point from raw arithmetic output: any NaN or infinite
    /// component means the evaluation hit a pole, which is `∞` on the sphere.
    pub(crate) fn from_raw(coords: Vec<T>) -> Self {
        if coords.iter().all(|c| c.is_finite()) {
            Point::Finite(coords)
        } else {
            Point::Infinity
        }
    }

    pub fn origin(k: usize) -> Self {
        Point::Finite(vec![T::zero(); k])
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn is_origin(&self) -> bool {
        match self {
            Point::Finite(x) => x.iter().all(|c| *c == T::zero()),
            Point::Infinity => false,
        }
    }

    pub fn coords(&self) -> Option<&[T]> {
        match self {
            Point::Finite(x) => Some(x),
            Point::Infinity => None,
        }
    }

    /// Dimension of a finite point; `None` for `∞`, which lives in every `k`.
    pub fn dim(&self) -> Option<usize> {
        self.coords().map(<[T]>::len)
    }

    /// Errors unless the point is `∞` or has exactly `k` coordinates.
    pub fn check_dim(&self, k: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != k => Err(Error::DimensionMismatch { expected: k, found: d }),
            _ => Ok(()),
        }
    }

    /// Euclidean norm; infinite for `∞`.
    pub fn norm(&self) -> T {
        match self {
            Point::Finite(x) => norm(x),
            Point::Infinity => T::infinity(),
        }
    }

    /// Multiplication by a finite real, `x·t`.
    pub fn scaled(&self, t: T) -> Result<Self> {
        scale(self, ExtScalar::Finite(t))
    }

    pub fn neg(&self) -> Self {
        match self {
            Point::Finite(x) => Point::Finite(x.iter().map(|c| -*c).collect()),
            Point::Infinity => Point::Infinity,
        }
    }
}

impl<T: Real> ExtScalar<T> {
    pub fn finite(v: T) -> Result<Self> {
        if v.is_nan() {
            return Err(Error::InvalidValue("NaN scalar".into()));
        }
        Ok(if v.is_infinite() { ExtScalar::Infinity } else { ExtScalar::Finite(v) })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtScalar::Finite(v) if *v == T::zero())
    }
}

impl<T: Real> From<T> for ExtScalar<T> {
    fn from(v: T) -> Self {
        if v.is_infinite() {
            ExtScalar::Infinity
        } else {
            ExtScalar::Finite(v)
        }
    }
}

impl<T: Real> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => f.write_str("inf"),
            Point::Finite(x) => {
                for (i, c) in x.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    // avoid printing "-0"
                    let c = if *c == T::zero() { T::zero() } else { *c };
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl<T: Real> fmt::Display for ExtScalar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::Finite(v) => write!(f, "{v}"),
            ExtScalar::Infinity => f.write_str("inf"),
        }
    }
}

/// The product `p·z` on `R^k ∪ {∞}`.
///
/// `0·∞` and `∞·0` are rejected with [`Error::IndeterminateProduct`].
pub fn scale<T: Real>(p: &Point<T>, z: ExtScalar<T>) -> Result<Point<T>> {
    match (p, z) {
        (Point::Finite(x), ExtScalar::Finite(t)) => Ok(Point::from_raw(x.iter().map(|c| *c * t).collect())),
        (Point::Finite(_), ExtScalar::Infinity) => {
            if p.is_origin() {
                Err(Error::IndeterminateProduct)
            } else {
                Ok(Point::Infinity)
            }
        }
        (Point::Infinity, ExtScalar::Finite(t)) => {
            if t == T::zero() {
                Err(Error::IndeterminateProduct)
            } else {
                Ok(Point::Infinity)
            }
        }
        (Point::Infinity, ExtScalar::Infinity) => Ok(Point::Infinity),
    }
}

/// Inverse stereographic embedding `R^k ∪ {∞} -> S^k ⊂ R^{k+1}`.
///
/// `x ↦ (2x, |x|²-1) / (|x|²+1)`, `∞ ↦ (0,…,0,1)`. `k` fixes the ambient
/// dimension of the north pole.
pub fn stereographic<T: Real>(p: &Point<T>, k: usize) -> Vec<T> {
    match p {
        Point::Infinity => {
            let mut v = vec![T::zero(); k + 1];
            v[k] = T::one();
            v
        }
        Point::Finite(x) => {
            let r = norm(x);
            let two = T::lit(2.0);
            let mut v: Vec<T>;
            if r <= T::one() {
                let d = r * r + T::one();
                v = x.iter().map(|c| two * *c / d).collect();
                v.push((r * r - T::one()) / d);
            } else {
                // divide through by r² so nothing overflows
                let s = T::one() / r;
                let d = T::one() + s * s;
                v = x.iter().map(|c| two * (*c * s) * s / d).collect();
                v.push((T::one() - s * s) / d);
            }
            v
        }
    }
}

/// Chordal distance: the Euclidean distance between stereographic images.
///
/// Evaluated through the closed forms `2|x-y| / (√(1+|x|²)·√(1+|y|²))` and
/// `2 / √(1+|x|²)`, which agree with the embedding but keep full relative
/// precision for nearby points.
pub fn chordal_distance<T: Real>(p: &Point<T>, q: &Point<T>) -> Result<T> {
    let two = T::lit(2.0);
    let d = match (p, q) {
        (Point::Infinity, Point::Infinity) => T::zero(),
        (Point::Finite(x), Point::Infinity) | (Point::Infinity, Point::Finite(x)) => two / T::one().hypot(norm(x)),
        (Point::Finite(x), Point::Finite(y)) => {
            if x.len() != y.len() {
                return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
            }
            let diff: Vec<T> = x.iter().zip(y).map(|(a, b)| *a - *b).collect();
            let nd = norm(&diff);
            if nd == T::zero() {
                return Ok(T::zero());
            }
            let (hx, hy) = (T::one().hypot(norm(x)), T::one().hypot(norm(y)));
            if nd.is_finite() {
                two * nd / hx / hy
            } else {
                // both huge; fall back to the embedding
                let k = x.len();
                let (u, v) = (stereographic(p, k), stereographic(q, k));
                let diff: Vec<T> = u.iter().zip(&v).map(|(a, b)| *a - *b).collect();
                norm(&diff)
            }
        }
    };
    Ok(d.min(two))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::finite(c.to_vec()).unwrap()
    }

    #[test]
    fn scale_examples() {
        assert_eq!(scale(&pt(&[1.0, 2.0]), ExtScalar::Finite(3.0)).unwrap(), pt(&[3.0, 6.0]));
        assert_eq!(scale(&pt(&[1.0, 1.0]), ExtScalar::Infinity).unwrap(), Point::Infinity);
        assert_eq!(scale(&pt(&[0.0, 0.0]), ExtScalar::Infinity).unwrap_err(), Error::IndeterminateProduct);
        assert_eq!(scale(&Point::<f64>::Infinity, ExtScalar::Finite(0.0)).unwrap_err(), Error::IndeterminateProduct);
        assert_eq!(scale(&Point::Infinity, ExtScalar::Finite(-2.0)).unwrap(), Point::Infinity);
        assert_eq!(scale(&pt(&[0.0, 0.0]), ExtScalar::Finite(5.0)).unwrap(), pt(&[0.0, 0.0]));
    }

    #[test]
    fn finite_rejects_nan_and_inf() {
        assert!(Point::finite(vec![1.0, f64::NAN]).is_err());
        assert!(Point::finite(vec![f64::INFINITY]).is_err());
        assert!(Point::<f64>::finite(vec![]).is_err());
        assert!(ExtScalar::finite(f64::NAN).is_err());
        assert_eq!(ExtScalar::finite(f64::INFINITY).unwrap(), ExtScalar::Infinity);
    }

    #[test]
    fn overflow_collapses_to_infinity() {
        assert_eq!(pt(&[1e300, 0.0]).scaled(1e300).unwrap(), Point::Infinity);
    }

    #[test]
    fn stereographic_examples() {
        assert_eq!(stereographic(&pt(&[0.0, 0.0]), 2), vec![0.0, 0.0, -1.0]);
        assert_eq!(stereographic(&Point::<f64>::Infinity, 2), vec![0.0, 0.0, 1.0]);
        assert_eq!(stereographic(&pt(&[1.0, 0.0]), 2), vec![1.0, 0.0, 0.0]);
        let far = stereographic(&pt(&[1e200, -1e200]), 2);
        assert!((norm(&far) - 1.0).abs() < 1e-14);
        assert!((far[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn chordal_examples() {
        let p = pt(&[0.3, -1.7]);
        assert_eq!(chordal_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(chordal_distance(&pt(&[0.0, 0.0]), &Point::Infinity).unwrap(), 2.0);
        let d = chordal_distance(&pt(&[1.0, 0.0]), &pt(&[0.0, 0.0])).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            chordal_distance(&pt(&[1.0]), &pt(&[1.0, 2.0])).unwrap_err(),
            Error::DimensionMismatch { expected: 1, found: 2 }
        );
        assert_eq!(chordal_distance(&Point::<f64>::Infinity, &Point::Infinity).unwrap(), 0.0);
    }

    #[test]
    fn display_round_numbers() {
        assert_eq!(pt(&[0.8, -0.0, 3.0]).to_string(), "0.8,0,3");
        assert_eq!(Point::<f64>::Infinity.to_string(), "inf");
    }
}
