//! The planar rational and algebraic examples `pvz1` … `pvz8`.

use std::fmt;

use crate::error::{Error, Result};
use crate::homothety::signed_cuberoot;
use crate::scalar::Real;
use crate::space::Point;

use super::singular::{SingularPiece, SingularSet};

/// A named planar example. `Pvz1`–`Pvz3` carry the two free constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogEntry<T> {
    /// `(x/(ax+1), y/(by+1))`
    Pvz1 { a: T, b: T },
    /// `(x, y)/(ax+by+1)`
    Pvz2 { a: T, b: T },
    /// `(x/((by+1)(ax+by+1)), y/(by+1))`
    Pvz3 { a: T, b: T },
    /// `(2x²-8y²+x, x²-4y²+y)/(4x-8y+1)`
    Pvz4,
    /// `(2x²+2y²+4x, 4y)/(x²+y²+4x+4)`
    Pvz5,
    /// Circle-map conjugate of `Pvz5`.
    Pvz6,
    /// Astroid-map conjugate of `Pvz1 { a: 1, b: 1 }`.
    Pvz7,
    /// `((x-y)²+x, (x-y)²+y)`
    Pvz8,
}

impl<T: Real> CatalogEntry<T> {
    pub const NAMES: [&'static str; 8] = ["pvz1", "pvz2", "pvz3", "pvz4", "pvz5", "pvz6", "pvz7", "pvz8"];

    /// Entry by name; `pvz1`–`pvz3` take `a`, `b`.
    pub fn by_name(name: &str, a: T, b: T) -> Result<Self> {
        Ok(match name {
            "pvz1" => CatalogEntry::Pvz1 { a, b },
            "pvz2" => CatalogEntry::Pvz2 { a, b },
            "pvz3" => CatalogEntry::Pvz3 { a, b },
            "pvz4" => CatalogEntry::Pvz4,
            "pvz5" => CatalogEntry::Pvz5,
            "pvz6" => CatalogEntry::Pvz6,
            "pvz7" => CatalogEntry::Pvz7,
            "pvz8" => CatalogEntry::Pvz8,
            other => return Err(Error::Parse(format!("unknown catalog entry '{other}'"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogEntry::Pvz1 { .. } => "pvz1",
            CatalogEntry::Pvz2 { .. } => "pvz2",
            CatalogEntry::Pvz3 { .. } => "pvz3",
            CatalogEntry::Pvz4 => "pvz4",
            CatalogEntry::Pvz5 => "pvz5",
            CatalogEntry::Pvz6 => "pvz6",
            CatalogEntry::Pvz7 => "pvz7",
            CatalogEntry::Pvz8 => "pvz8",
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            CatalogEntry::Pvz1 { .. } => "(x/(ax+1), y/(by+1))",
            CatalogEntry::Pvz2 { .. } => "(x/(ax+by+1), y/(ax+by+1))",
            CatalogEntry::Pvz3 { .. } => "(x/((by+1)(ax+by+1)), y/(by+1))",
            CatalogEntry::Pvz4 => "((2x^2-8y^2+x)/(4x-8y+1), (x^2-4y^2+y)/(4x-8y+1))",
            CatalogEntry::Pvz5 => "((2x^2+2y^2+4x)/(x^2+y^2+4x+4), 4y/(x^2+y^2+4x+4))",
            CatalogEntry::Pvz6 => "l^-1 o pvz5 o l, l(x,y) = ((x^2+y^2)/y, (x^2+y^2)/x); rational of degree 12",
            CatalogEntry::Pvz7 => {
                "(x^3/A + xy^2/(A^(1/3) B^(2/3)), y^3/B + x^2y/(A^(2/3) B^(1/3))), A = x^3+x^2+y^2, B = y^3+x^2+y^2"
            }
            CatalogEntry::Pvz8 => "((x-y)^2+x, (x-y)^2+y)",
        }
    }

    /// Continuous on all of `R^2 ∪ {∞}`. Only `pvz5` and `pvz8` are.
    pub fn is_continuous(&self) -> bool {
        matches!(self, CatalogEntry::Pvz5 | CatalogEntry::Pvz8)
    }

    pub fn note(&self) -> &'static str {
        match self {
            CatalogEntry::Pvz1 { .. } => "continuous on the torus S^1 x S^1, not on S^2",
            CatalogEntry::Pvz2 { .. } => "continuous on the projective plane RP^2, not on S^2",
            CatalogEntry::Pvz3 { .. } => "not even continuous on S^2",
            CatalogEntry::Pvz4 => "quadratic-form flow with indefinite Q = x^2-4y^2 and Q(a) = 0, a = (2,1)",
            CatalogEntry::Pvz5 => "quadratic-form flow a = (2,0), Q = (x^2+y^2)/4; limit of the Quad2D iteration",
            CatalogEntry::Pvz6 => "fails to be continuous at (0,0) and at infinity",
            CatalogEntry::Pvz7 => "discontinuous, like pvz1(1,1) it is conjugate to",
            CatalogEntry::Pvz8 => "linear-form flow c = (1,1), L = x-y",
        }
    }

    pub fn singular_set(&self) -> SingularSet<T> {
        let (zero, one) = (T::zero(), T::one());
        let line = |nx: T, ny: T, c: T| SingularPiece::Affine { normal: vec![nx, ny], offset: c };
        let mut s = SingularSet::empty();
        match *self {
            CatalogEntry::Pvz1 { a, b } => {
                if a != zero {
                    s = s.with(line(a, zero, one));
                }
                if b != zero {
                    s = s.with(line(zero, b, one));
                }
                s.with(SingularPiece::Point(Point::Infinity))
            }
            CatalogEntry::Pvz2 { a, b } => {
                if a != zero || b != zero {
                    s = s.with(line(a, b, one));
                }
                s.with(SingularPiece::Point(Point::Infinity))
            }
            CatalogEntry::Pvz3 { a, b } => {
                if b != zero {
                    s = s.with(line(zero, b, one));
                }
                if a != zero || b != zero {
                    s = s.with(line(a, b, one));
                }
                s.with(SingularPiece::Point(Point::Infinity))
            }
            CatalogEntry::Pvz4 => s.with(line(T::lit(4.0), T::lit(-8.0), one)),
            CatalogEntry::Pvz5 => s.with(SingularPiece::Point(Point::Finite(vec![T::lit(-2.0), zero]))),
            CatalogEntry::Pvz6 => {
                s.with(SingularPiece::Point(Point::origin(2))).with(SingularPiece::Point(Point::Infinity))
            }
            CatalogEntry::Pvz7 => s
                .with(SingularPiece::Cubic { axis: 0 })
                .with(SingularPiece::Cubic { axis: 1 })
                .with(SingularPiece::Point(Point::origin(2))),
            CatalogEntry::Pvz8 => s,
        }
    }

    /// Value at `∞`: the exceptional vector where it exists, otherwise `∞`
    /// for the entries that have no limit there.
    pub(crate) fn at_infinity(&self) -> Point<T> {
        match self {
            CatalogEntry::Pvz5 => Point::Finite(vec![T::lit(2.0), T::zero()]),
            CatalogEntry::Pvz6 => Point::origin(2),
            _ => Point::Infinity,
        }
    }

    /// The printed formula at a finite planar point.
    pub(crate) fn eval_finite(&self, x: T, y: T) -> Point<T> {
        let one = T::one();
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let v = match *self {
            CatalogEntry::Pvz1 { a, b } => vec![x / (a * x + one), y / (b * y + one)],
            CatalogEntry::Pvz2 { a, b } => {
                let d = a * x + b * y + one;
                vec![x / d, y / d]
            }
            CatalogEntry::Pvz3 { a, b } => {
                let d1 = b * y + one;
                let d2 = a * x + b * y + one;
                vec![x / (d1 * d2), y / d1]
            }
            CatalogEntry::Pvz4 => {
                let d = four * x - T::lit(8.0) * y + one;
                let q = x * x - four * y * y;
                vec![(two * q + x) / d, (q + y) / d]
            }
            CatalogEntry::Pvz5 => {
                let r2 = x * x + y * y;
                let d = r2 + four * x + four;
                vec![(two * r2 + four * x) / d, four * y / d]
            }
            CatalogEntry::Pvz6 => {
                let (x2, y2) = (x * x, y * y);
                let n = x2 * x2 + two * y2 * x2 + y2 * y2 + two * y * x2;
                let r2 = x2 + y2;
                // x⁶+3x⁴y²+3x²y⁴+y⁶ + 4yx⁴ + 4y³x² + 4y²x² = r2³ + 4y·x²·r2 + 4x²y²
                let d = r2 * r2 * r2 + four * y * x2 * r2 + four * x2 * y2;
                let dd = d * d;
                vec![four * n * n * y2 * x / dd, T::lit(8.0) * n * x2 * y2 * y2 / dd]
            }
            CatalogEntry::Pvz7 => {
                let r2 = x * x + y * y;
                let a = x * x * x + r2;
                let b = y * y * y + r2;
                let (ca, cb) = (signed_cuberoot(a), signed_cuberoot(b));
                vec![x * x * x / a + x * y * y / (ca * cb * cb), y * y * y / b + x * x * y / (ca * ca * cb)]
            }
            CatalogEntry::Pvz8 => {
                let s = (x - y) * (x - y);
                vec![s + x, s + y]
            }
        };
        if x == T::zero() && y == T::zero() {
            return Point::origin(2);
        }
        Point::from_raw(v)
    }

    /// Pointwise limit of `(1/z)·φ(xz)` as `z -> ∞` at a finite point, for
    /// the entries not handled through a conjugation.
    pub(crate) fn flow_at_infinity(&self, x: T, y: T) -> Result<Point<T>> {
        let zero = T::zero();
        let p = |u: T, v: T| Ok(Point::Finite(vec![u, v]));
        match *self {
            CatalogEntry::Pvz1 { a, b } => p(if a != zero { zero } else { x }, if b != zero { zero } else { y }),
            CatalogEntry::Pvz2 { a, b } => {
                if a * x + b * y != zero {
                    p(zero, zero)
                } else {
                    p(x, y)
                }
            }
            CatalogEntry::Pvz3 { a, b } => {
                let first = if b * y == zero && a * x + b * y == zero { x } else { zero };
                p(first, if b * y != zero { zero } else { y })
            }
            CatalogEntry::Pvz4 => {
                // (1/z)φ(xz) = (z a Q(x) + x)/(z B(x) + 1), a = (2,1)
                let bl = T::lit(4.0) * x - T::lit(8.0) * y;
                let q = x * x - T::lit(4.0) * y * y;
                if bl != zero {
                    Ok(Point::from_raw(vec![T::lit(2.0) * q / bl, q / bl]))
                } else if q != zero {
                    Ok(Point::Infinity)
                } else {
                    p(x, y)
                }
            }
            CatalogEntry::Pvz5 => p(zero, zero),
            CatalogEntry::Pvz8 => Err(Error::UnboundedFlow),
            CatalogEntry::Pvz6 | CatalogEntry::Pvz7 => {
                unreachable!("conjugate entries are resolved through their conjugation")
            }
        }
    }
}

impl<T: Real> fmt::Display for CatalogEntry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogEntry::Pvz1 { a, b } | CatalogEntry::Pvz2 { a, b } | CatalogEntry::Pvz3 { a, b } => {
                write!(f, "catalog {} a={} b={}", self.name(), a, b)
            }
            _ => write!(f, "catalog {}", self.name()),
        }
    }
}
