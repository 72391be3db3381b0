//! Solution families of `(1-z)φ(x) = φ(φ(xz)(1-z)/z)` and the flow
//! `φ^z(x) = (1/z)·φ(xz)` they generate.

mod catalog;
mod checks;
mod singular;

use std::fmt;

pub use catalog::CatalogEntry;
pub use checks::{
    axis_action_residual, closed_form_conjugate, commuting_product_check, compose_two_path_residual, conjugate,
    conjugate_linear_identity_check, quadflow_compose, surjectivity_probe, tarp_identity_check, verify_group_law,
    verify_iterate_identity, verify_translation, CommutingReport, SurjectivityReport,
};
pub use singular::{SingularPiece, SingularSet};

use crate::error::{Error, Result};
use crate::forms::{LinearForm, QuadraticForm};
use crate::homothety::Homothety;
use crate::scalar::{norm, Real};
use crate::space::{scale, ExtScalar, Point};

/// Relative threshold below which a quadratic-flow denominator counts as a pole.
pub const POLE_THRESHOLD: f64 = 1e-13;

/// A solution of the functional equation.
///
/// Use the checked constructors ([`Solution::quad_flow`], …); the variants are
/// public for matching.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution<T> {
    /// `φ_{a,Q}(x) = (aQ(x)+x) / (Q(x)Q(a) + B(x,a) + 1)`, `Q(a) ≠ 0`.
    QuadFlow {
        a: Vec<T>,
        q: QuadraticForm<T>,
    },
    /// `φ_{c,L}(x) = c·L(x)² + x`, `L(c) = 0`.
    LinFlow {
        c: Vec<T>,
        l: LinearForm<T>,
    },
    /// `φ_1(x)_j = (Σx_i² + k x_j) / Σ(x_i+1)²`.
    Canonical1 {
        k: usize,
    },
    /// `φ_∞(x)_j = d_j (Σx_i)² + x_j`, `Σd_i = 0`.
    CanonicalInf {
        d: Vec<T>,
    },
    Identity {
        k: usize,
    },
    Zero {
        k: usize,
    },
    Catalog(CatalogEntry<T>),
    /// `ℓ⁻¹ ∘ inner ∘ ℓ`.
    Conjugated {
        inner: Box<Solution<T>>,
        ell: Homothety<T>,
    },
    /// `outer ∘ inner`; a solution whenever the two commute.
    Product {
        outer: Box<Solution<T>>,
        inner: Box<Solution<T>>,
    },
}

/// Result of evaluating a quadratic-form flow.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadEval<T> {
    pub point: Point<T>,
    /// The denominator was below the pole threshold but not exactly zero.
    pub approximate: bool,
}

fn check_len<T>(v: &[T], k: usize) -> Result<()> {
    if v.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: v.len() });
    }
    Ok(())
}

/// Evaluates `φ_{a,Q}` at `p`.
pub fn eval_quad_flow<T: Real>(a: &[T], q: &QuadraticForm<T>, p: &Point<T>) -> Result<QuadEval<T>> {
    let qa = q.eval_q(a)?;
    let x = match p {
        Point::Infinity => {
            let point = Point::from_raw(a.iter().map(|c| *c / qa).collect());
            return Ok(QuadEval { point, approximate: false });
        }
        Point::Finite(x) => x,
    };
    let qx = q.eval_q(x)?;
    let num: Vec<T> = a.iter().zip(x).map(|(ai, xi)| *ai * qx + *xi).collect();
    let den = qx * qa + q.bilinear(x, a)? + T::one();
    if den == T::zero() {
        return Ok(QuadEval { point: Point::Infinity, approximate: false });
    }
    if den.abs() < T::lit(POLE_THRESHOLD) * (T::one() + norm(&num)) {
        return Ok(QuadEval { point: Point::Infinity, approximate: true });
    }
    Ok(QuadEval { point: Point::from_raw(num.iter().map(|c| *c / den).collect()), approximate: false })
}

impl<T: Real> Solution<T> {
    pub fn quad_flow(a: Vec<T>, q: QuadraticForm<T>) -> Result<Self> {
        check_len(&a, q.dim())?;
        if a.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidValue("a must be finite".into()));
        }
        if q.eval_q(&a)? == T::zero() {
            return Err(Error::InvalidValue("quadratic-form flow needs Q(a) != 0".into()));
        }
        Ok(Solution::QuadFlow { a, q })
    }

    pub fn lin_flow(c: Vec<T>, l: LinearForm<T>) -> Result<Self> {
        check_len(&c, l.dim())?;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidValue("c must be finite".into()));
        }
        let lc = l.eval_l(&c)?;
        if lc.abs() > T::lit(1e-12) * norm(&c) * l.norm() {
            return Err(Error::InvalidValue(format!("linear-form flow needs L(c) = 0, got {lc}")));
        }
        Ok(Solution::LinFlow { c, l })
    }

    pub fn canonical1(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidValue("dimension must be >= 1".into()));
        }
        Ok(Solution::Canonical1 { k })
    }

    pub fn canonical_inf(d: Vec<T>) -> Result<Self> {
        if d.is_empty() || d.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidValue("d must be a nonempty finite vector".into()));
        }
        let s = d.iter().fold(T::zero(), |acc, v| acc + *v);
        if s.abs() > T::lit(1e-12) * norm(&d) {
            return Err(Error::InvalidValue(format!("canonical infinite solution needs sum(d) = 0, got {s}")));
        }
        Ok(Solution::CanonicalInf { d })
    }

    pub fn identity(k: usize) -> Self {
        Solution::Identity { k }
    }

    pub fn zero(k: usize) -> Self {
        Solution::Zero { k }
    }

    pub fn catalog(entry: CatalogEntry<T>) -> Self {
        Solution::Catalog(entry)
    }

    pub fn conjugated(inner: Solution<T>, ell: Homothety<T>) -> Result<Self> {
        if let (Some(a), Some(b)) = (inner.dim(), ell.required_dim()) {
            if a != b {
                return Err(Error::DimensionMismatch { expected: a, found: b });
            }
        }
        Ok(Solution::Conjugated { inner: Box::new(inner), ell })
    }

    pub fn product(outer: Solution<T>, inner: Solution<T>) -> Result<Self> {
        if outer.dim() != inner.dim() {
            return Err(Error::DimensionMismatch {
                expected: outer.dim().unwrap_or(0),
                found: inner.dim().unwrap_or(0),
            });
        }
        Ok(Solution::Product { outer: Box::new(outer), inner: Box::new(inner) })
    }

    /// The dimension `k` the solution acts on.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Solution::QuadFlow { a, .. } => Some(a.len()),
            Solution::LinFlow { c, .. } => Some(c.len()),
            Solution::Canonical1 { k } | Solution::Identity { k } | Solution::Zero { k } => Some(*k),
            Solution::CanonicalInf { d } => Some(d.len()),
            Solution::Catalog(_) => Some(2),
            Solution::Conjugated { inner, ell } => inner.dim().or(ell.required_dim()),
            Solution::Product { outer, .. } => outer.dim(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Solution::Zero { .. })
    }

    /// Whether the solution is continuous on all of `R^k ∪ {∞}`.
    pub fn is_continuous(&self) -> bool {
        match self {
            Solution::QuadFlow { q, .. } => q.is_positive_definite(),
            Solution::Catalog(e) => e.is_continuous(),
            Solution::Conjugated { inner, ell } => inner.is_continuous() && homeomorphic(ell),
            Solution::Product { outer, inner } => outer.is_continuous() && inner.is_continuous(),
            _ => true,
        }
    }

    /// Declared singular set (for conjugates and products this is the set of
    /// the building blocks, measured in their own coordinates; see
    /// [`Solution::singular_distance`]).
    pub fn singular_set(&self) -> SingularSet<T> {
        match self {
            Solution::QuadFlow { a, q } => {
                let qa = q.eval_q(a).unwrap_or(T::one());
                let center: Vec<T> = a.iter().map(|c| -*c / qa).collect();
                if q.is_positive_definite() {
                    SingularSet::empty().with(SingularPiece::Point(Point::Finite(center)))
                } else {
                    SingularSet::empty().with(SingularPiece::Quadric { form: q.clone(), center })
                }
            }
            Solution::Canonical1 { k } => {
                SingularSet::empty().with(SingularPiece::Point(Point::Finite(vec![-T::one(); *k])))
            }
            Solution::Catalog(e) => e.singular_set(),
            Solution::Conjugated { inner, .. } => inner.singular_set(),
            Solution::Product { outer, inner } => {
                let mut s = inner.singular_set();
                s.pieces.extend(outer.singular_set().pieces);
                s
            }
            _ => SingularSet::empty(),
        }
    }

    /// Approximate chordal distance from `p` to the points where the solution
    /// has a pole or is discontinuous.
    ///
    /// Conjugates measure the inner set at `ℓ(p)` together with the
    /// homothety's own excluded set; products measure the outer set at the
    /// inner image.
    pub fn singular_distance(&self, p: &Point<T>) -> T {
        match self {
            Solution::Conjugated { inner, ell } => {
                let own = ell.excluded_distance(p);
                match ell.apply(p) {
                    Ok(q) => own.min(inner.singular_distance(&q)),
                    Err(_) => T::zero(),
                }
            }
            Solution::Product { outer, inner } => {
                let d = inner.singular_distance(p);
                match inner.eval(p) {
                    Ok(q) => d.min(outer.singular_distance(&q)),
                    Err(_) => T::zero(),
                }
            }
            // pvz6 and pvz7 have closed forms, but also inherit the poles of
            // the maps they conjugate
            Solution::Catalog(e @ (CatalogEntry::Pvz6 | CatalogEntry::Pvz7)) => {
                let via = catalog_conjugate(e).singular_distance(p);
                via.min(e.singular_set().distance(p))
            }
            _ => self.singular_set().distance(p),
        }
    }

    /// `φ(∞)`: the exceptional vector `a` when finite.
    pub fn exceptional_vector(&self) -> Result<Point<T>> {
        self.eval(&Point::Infinity)
    }

    pub fn eval(&self, p: &Point<T>) -> Result<Point<T>> {
        if let Some(k) = self.dim() {
            p.check_dim(k)?;
        }
        match self {
            Solution::QuadFlow { a, q } => Ok(eval_quad_flow(a, q, p)?.point),
            Solution::LinFlow { c, l } => match p {
                Point::Infinity => Ok(Point::Infinity),
                Point::Finite(x) => {
                    let lx = l.eval_l(x)?;
                    let s = lx * lx;
                    Ok(Point::from_raw(c.iter().zip(x).map(|(ci, xi)| *ci * s + *xi).collect()))
                }
            },
            Solution::Canonical1 { k } => match p {
                Point::Infinity => Ok(Point::Finite(vec![T::one(); *k])),
                Point::Finite(x) => {
                    let kk = T::from_usize(*k).unwrap();
                    let sq = x.iter().fold(T::zero(), |acc, v| acc + *v * *v);
                    let den = x.iter().fold(T::zero(), |acc, v| acc + (*v + T::one()) * (*v + T::one()));
                    if den == T::zero() {
                        return Ok(Point::Infinity);
                    }
                    Ok(Point::from_raw(x.iter().map(|xj| (sq + kk * *xj) / den).collect()))
                }
            },
            Solution::CanonicalInf { d } => match p {
                Point::Infinity => Ok(Point::Infinity),
                Point::Finite(x) => {
                    let s = x.iter().fold(T::zero(), |acc, v| acc + *v);
                    let s2 = s * s;
                    Ok(Point::from_raw(d.iter().zip(x).map(|(dj, xj)| *dj * s2 + *xj).collect()))
                }
            },
            Solution::Identity { .. } => Ok(p.clone()),
            Solution::Zero { k } => Ok(Point::origin(*k)),
            Solution::Catalog(e) => match p {
                Point::Infinity => Ok(e.at_infinity()),
                Point::Finite(x) => Ok(e.eval_finite(x[0], x[1])),
            },
            Solution::Conjugated { inner, ell } => ell.apply_inverse(&inner.eval(&ell.apply(p)?)?),
            Solution::Product { outer, inner } => outer.eval(&inner.eval(p)?),
        }
    }

    /// `φ^z(p) = (1/z)·φ(pz)`, extended to `z = 0` by `p` and to `z = ∞` by
    /// the pointwise limit.
    pub fn flow(&self, z: ExtScalar<T>, p: &Point<T>) -> Result<Point<T>> {
        if let Some(k) = self.dim() {
            p.check_dim(k)?;
        }
        match z {
            ExtScalar::Finite(t) if t == T::zero() => {
                if p.is_infinity() {
                    return Ok(Point::Infinity);
                }
                match self {
                    Solution::Zero { k } => Ok(Point::origin(*k)),
                    _ => Ok(p.clone()),
                }
            }
            ExtScalar::Finite(t) => {
                let inner = self.eval(&scale(p, z)?)?;
                scale(&inner, ExtScalar::Finite(T::one() / t))
            }
            ExtScalar::Infinity => self.flow_at_infinity(p),
        }
    }

    fn flow_at_infinity(&self, p: &Point<T>) -> Result<Point<T>> {
        let k = self.dim();
        let origin = || Point::origin(k.or(p.dim()).unwrap_or(1));
        match self {
            Solution::Identity { .. } => Ok(p.clone()),
            Solution::Zero { k } => Ok(Point::origin(*k)),
            Solution::LinFlow { .. } | Solution::CanonicalInf { .. } => Err(Error::UnboundedFlow),
            Solution::QuadFlow { a, q } => match p {
                Point::Infinity => Ok(origin()),
                Point::Finite(x) => {
                    // φ^z = φ_{za,Q}: the z² term dominates unless Q(x) = 0
                    let qx = q.eval_q(x)?;
                    if qx != T::zero() || q.bilinear(x, a)? != T::zero() {
                        Ok(origin())
                    } else {
                        Ok(p.clone())
                    }
                }
            },
            Solution::Canonical1 { .. } => Ok(origin()),
            Solution::Catalog(e @ (CatalogEntry::Pvz6 | CatalogEntry::Pvz7)) => {
                catalog_conjugate(e).flow_at_infinity(p)
            }
            Solution::Catalog(e) => match p {
                Point::Infinity => {
                    if matches!(e, CatalogEntry::Pvz8) {
                        Err(Error::UnboundedFlow)
                    } else if e.at_infinity().is_infinity() {
                        Ok(Point::Infinity)
                    } else {
                        Ok(origin())
                    }
                }
                Point::Finite(x) => e.flow_at_infinity(x[0], x[1]),
            },
            Solution::Conjugated { inner, ell } => ell.apply_inverse(&inner.flow_at_infinity(&ell.apply(p)?)?),
            Solution::Product { outer, inner } => outer.flow_at_infinity(&inner.flow_at_infinity(p)?),
        }
    }
}

/// `pvz6` and `pvz7` as explicit conjugates.
pub(crate) fn catalog_conjugate<T: Real>(e: &CatalogEntry<T>) -> Solution<T> {
    match e {
        CatalogEntry::Pvz6 => {
            Solution::Conjugated { inner: Box::new(Solution::Catalog(CatalogEntry::Pvz5)), ell: Homothety::Circle }
        }
        CatalogEntry::Pvz7 => Solution::Conjugated {
            inner: Box::new(Solution::Catalog(CatalogEntry::Pvz1 { a: T::one(), b: T::one() })),
            ell: Homothety::Astroid,
        },
        _ => Solution::Catalog(*e),
    }
}

fn homeomorphic<T: Real>(h: &Homothety<T>) -> bool {
    match h {
        Homothety::Circle => false,
        Homothety::Compose(hs) => hs.iter().all(homeomorphic),
        Homothety::Inverse(h) => homeomorphic(h),
        _ => true,
    }
}

fn join<T: Real>(v: &[T]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl<T: Real> fmt::Display for Solution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solution::QuadFlow { a, q } => write!(f, "quadflow a={} Q={}", join(a), join(&q.upper_triangle())),
            Solution::LinFlow { c, l } => write!(f, "linflow c={} L={}", join(c), join(l.coeffs())),
            Solution::Canonical1 { k } => write!(f, "canonical1 k={k}"),
            Solution::CanonicalInf { d } => write!(f, "canonicalinf d={}", join(d)),
            Solution::Identity { k } => write!(f, "identity k={k}"),
            Solution::Zero { k } => write!(f, "zero k={k}"),
            Solution::Catalog(e) => write!(f, "{e}"),
            Solution::Conjugated { inner, ell } => write!(f, "conjugated({inner}; {ell})"),
            Solution::Product { outer, inner } => write!(f, "product({outer}; {inner})"),
        }
    }
}
