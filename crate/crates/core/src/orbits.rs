//! Orbits `𝒱(x) = {(1/z)φ(xz)}`, collinearity, and representation sets.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sampling::{sample_rng, uniform};
use crate::scalar::{norm, Real};
use crate::solutions::Solution;
use crate::space::{ExtScalar, Point};

/// Samples `(z, φ^z(x))` of the orbit through `base`, sorted by `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTrace<T> {
    pub base: Point<T>,
    pub samples: Vec<(T, Point<T>)>,
}

impl<T: Real> OrbitTrace<T> {
    /// Point recorded at exactly this `z`, if any.
    pub fn at(&self, z: T) -> Option<&Point<T>> {
        self.samples.iter().find(|(w, _)| *w == z).map(|(_, p)| p)
    }

    pub fn infinite_count(&self) -> usize {
        self.samples.iter().filter(|(_, p)| p.is_infinity()).count()
    }
}

/// Representative `x` (with `Σx_i = 0`) and orbit parameter `z` such that
/// `φ_1^z(x) = y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepSetSolution<T> {
    pub z: T,
    pub x: Vec<T>,
    /// The orbit of `y` is represented by `∞`; `x` is then zero and `z = k/Y`.
    pub at_infinity: bool,
}

impl<T: Real> RepSetSolution<T> {
    /// The representative as a point of the compactified space.
    pub fn representative(&self) -> Point<T> {
        if self.at_infinity {
            Point::Infinity
        } else {
            Point::Finite(self.x.clone())
        }
    }
}

/// Orbit of `x` sampled on `z_grid`; `z = 0` and `z = 1` are always included.
pub fn orbit_trace<T: Real>(s: &Solution<T>, x: &Point<T>, z_grid: &[T]) -> Result<OrbitTrace<T>> {
    if let Some(k) = s.dim() {
        x.check_dim(k)?;
    }
    if s.singular_distance(x) <= T::lit(1e-12) {
        return Err(Error::InvalidValue(format!("base point {x} lies on the singular set")));
    }
    let mut zs: Vec<T> = z_grid.to_vec();
    if zs.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidValue("orbit grid must be finite".into()));
    }
    zs.push(T::zero());
    zs.push(T::one());
    zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    zs.dedup();
    let samples = zs.into_par_iter().map(|z| Ok((z, s.flow(ExtScalar::Finite(z), x)?))).collect::<Result<Vec<_>>>()?;
    Ok(OrbitTrace { base: x.clone(), samples })
}

/// Evenly spaced grid of `steps + 1` values over `[lo, hi]`.
pub fn linear_grid<T: Real>(lo: T, hi: T, steps: usize) -> Vec<T> {
    let n = T::from_usize(steps.max(1)).unwrap();
    (0..=steps.max(1)).map(|i| lo + (hi - lo) * T::from_usize(i).unwrap() / n).collect()
}

fn det2<T: Real>(u: &[T], v: &[T]) -> T {
    u[0] * v[1] - u[1] * v[0]
}

/// `det(x, φ(x))` for `k = 2`; vanishes exactly when `x` and `φ(x)` are collinear.
pub fn collinearity_check<T: Real>(s: &Solution<T>, x: &[T], a: &[T]) -> Result<T> {
    if x.len() != 2 {
        return Err(Error::UnsupportedDimension { required: 2, found: x.len() });
    }
    if a.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: a.len() });
    }
    if x.iter().all(|c| *c == T::zero()) {
        return Err(Error::ZeroInput);
    }
    let fx = s.eval(&Point::finite(x.to_vec())?)?;
    let fx = fx.coords().ok_or_else(|| Error::InvalidValue("φ(x) is the point at infinity".into()))?;
    Ok(det2(x, fx))
}

/// Solves `φ_1^z(x) = y` with `Σx_i = 0` for the canonical solution `φ_1`.
pub fn repset_solve_phi1<T: Real>(y: &[T], k: usize) -> Result<RepSetSolution<T>> {
    if y.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: y.len() });
    }
    if y.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidValue("y must be finite".into()));
    }
    if y.iter().all(|c| *c == T::zero()) {
        return Err(Error::ZeroInput);
    }
    let kk = T::from_usize(k).unwrap();
    let big_y = y.iter().fold(T::zero(), |acc, v| acc + *v);
    if big_y == T::zero() {
        return Ok(RepSetSolution { z: T::zero(), x: y.to_vec(), at_infinity: false });
    }
    let mean = big_y / kk;
    let spread = y.iter().fold(T::zero(), |acc, v| acc.max((*v - mean).abs()));
    if spread <= T::lit(1e-10) * norm(y) {
        return Ok(RepSetSolution { z: kk / big_y, x: vec![T::zero(); k], at_infinity: true });
    }
    let s = y.iter().fold(T::zero(), |acc, v| {
        let d = kk * *v - big_y;
        acc + d * d
    });
    let z = kk * kk * big_y / (s + kk * big_y * big_y);
    let den = kk - z * big_y;
    let x = y.iter().map(|v| *v - big_y * (T::one() - z * *v) / den).collect();
    Ok(RepSetSolution { z, x, at_infinity: false })
}

/// Outcome of [`line_repset_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineRepsetReport {
    pub samples: usize,
    /// Orbits found to meet the line away from their base point.
    pub violations: usize,
    /// Index of the first violating sample.
    pub first_violation: Option<usize>,
}

impl LineRepsetReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Number of points on the `z` scan used by [`line_repset_check`].
pub const LINE_SCAN_POINTS: usize = 2001;
/// Half-width of the `z` scan used by [`line_repset_check`].
pub const LINE_SCAN_RANGE: f64 = 50.0;

/// Samples base points `t·direction` and scans each orbit for sign changes of
/// `det(direction, φ^z(x0))`; an orbit passes when its only crossing of the
/// line is at `z = 0`.
pub fn line_repset_check<T: Real>(
    s: &Solution<T>,
    direction: &[T],
    a: &[T],
    n_samples: usize,
    seed: u64,
) -> Result<LineRepsetReport> {
    if direction.len() != 2 || a.len() != 2 {
        return Err(Error::UnsupportedDimension { required: 2, found: direction.len() });
    }
    if s.dim().is_some_and(|k| k != 2) {
        return Err(Error::UnsupportedDimension { required: 2, found: s.dim().unwrap() });
    }
    let (dn, an) = (norm(direction), norm(a));
    if dn == T::zero() {
        return Err(Error::ZeroInput);
    }
    if det2(direction, a).abs() <= T::lit(1e-12) * dn * an {
        return Err(Error::DirectionParallelToA);
    }
    let grid: Vec<T> = linear_grid(-T::lit(LINE_SCAN_RANGE), T::lit(LINE_SCAN_RANGE), LINE_SCAN_POINTS - 1)
        .into_iter()
        .filter(|z| *z != T::zero())
        .collect();
    let outcomes = (0..n_samples)
        .into_par_iter()
        .map(|i| -> Result<bool> {
            let mut rng = sample_rng(seed, i as u64);
            let t = loop {
                let t = uniform(&mut rng, T::lit(-3.0), T::lit(3.0));
                if t.abs() >= T::lit(0.05) {
                    break t;
                }
            };
            let x0 = Point::Finite(direction.iter().map(|d| *d * t).collect());
            let mut prev: Option<(T, T)> = None;
            let mut crossings = 0usize;
            for &z in &grid {
                let p = s.flow(ExtScalar::Finite(z), &x0)?;
                let Some(c) = p.coords() else {
                    prev = None;
                    continue;
                };
                let d = det2(direction, c);
                if let Some((pz, pd)) = prev {
                    let straddles_base = pz < T::zero() && z > T::zero();
                    if !straddles_base && (d == T::zero() || pd.signum() != d.signum()) {
                        crossings += 1;
                    }
                }
                prev = Some((z, d));
            }
            Ok(crossings == 0)
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = outcomes.iter().filter(|ok| !**ok).count();
    let first_violation = outcomes.iter().position(|ok| !ok);
    Ok(LineRepsetReport { samples: n_samples, violations, first_violation })
}
