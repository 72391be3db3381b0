//! Numerical checks of the identities satisfied by the solution families.

use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::homothety::Homothety;
use crate::linalg::Matrix;
use crate::sampling::{sweep, uniform, Budget, Sample, SamplingBox, VerificationReport, WorstCase, EXCLUSION_RADIUS};
use crate::scalar::{norm, Real};
use crate::space::{chordal_distance, scale, ExtScalar, Point};

use super::{CatalogEntry, Solution};

fn near_singular<T: Real>(s: &Solution<T>, pts: &[&Point<T>]) -> bool {
    let delta = T::lit(EXCLUSION_RADIUS);
    pts.iter().any(|p| s.singular_distance(p) < delta)
}

fn require_dim<T: Real>(s: &Solution<T>) -> Result<usize> {
    s.dim().ok_or_else(|| Error::InvalidValue("solution has no fixed dimension".into()))
}

/// Translation-equation residuals `(1-z)φ(x)` vs `φ(φ(xz)(1-z)/z)`.
///
/// Draws `x` from the box and `z` from its `z` interval; a draw is rejected
/// when `x`, `xz` or `φ(xz)(1-z)/z` lies within [`EXCLUSION_RADIUS`] of the
/// declared singular set.
pub fn verify_translation<T: Real>(
    s: &Solution<T>,
    budget: Budget,
    seed: u64,
    bx: &SamplingBox<T>,
    tol: T,
) -> Result<VerificationReport<T>> {
    if tol.is_nan() || tol <= T::zero() {
        return Err(Error::InvalidValue("tolerance must be positive".into()));
    }
    let k = require_dim(s)?;
    let report = sweep(seed, budget, |rng| {
        let x = bx.point(rng, k);
        let z = bx.z(rng);
        let one_minus = T::one() - z;
        let xz = x.scaled(z)?;
        let inner = s.eval(&xz)?;
        let arg = inner.scaled(one_minus / z)?;
        if near_singular(s, &[&x, &xz, &arg]) {
            return Ok(Sample::Excluded);
        }
        let lhs = s.eval(&x)?.scaled(one_minus)?;
        let rhs = s.eval(&arg)?;
        Ok(Sample::Residual { value: chordal_distance(&lhs, &rhs)?, worst: WorstCase::new(x, vec![z]) })
    })?;
    Ok(report.with_tol(tol))
}

fn draw_nonzero<T: Real>(rng: &mut crate::sampling::SampleRng, lo: T, hi: T, min_abs: T) -> T {
    loop {
        let v = uniform(rng, lo, hi);
        if v.abs() >= min_abs {
            return v;
        }
    }
}

/// Group law `φ^{z1} ∘ φ^{z2} = φ^{z1+z2}` on seeded `x` in the box and
/// `z1, z2` uniform in `[-3, 3]` with `|z1|, |z2|, |z1+z2| >= 0.05`.
pub fn verify_group_law<T: Real>(
    s: &Solution<T>,
    budget: Budget,
    seed: u64,
    bx: &SamplingBox<T>,
) -> Result<VerificationReport<T>> {
    let k = require_dim(s)?;
    let (lo, hi, gap) = (T::lit(-3.0), T::lit(3.0), T::lit(0.05));
    sweep(seed, budget, |rng| {
        let x = bx.point(rng, k);
        let (z1, z2) = loop {
            let z1 = draw_nonzero(rng, lo, hi, gap);
            let z2 = draw_nonzero(rng, lo, hi, gap);
            if (z1 + z2).abs() >= gap {
                break (z1, z2);
            }
        };
        let inner = s.flow(ExtScalar::Finite(z2), &x)?;
        let args = [x.scaled(z2)?, inner.scaled(z1)?, x.scaled(z1 + z2)?];
        if near_singular(s, &[&x, &args[0], &args[1], &args[2]]) {
            return Ok(Sample::Excluded);
        }
        let lhs = s.flow(ExtScalar::Finite(z1), &inner)?;
        let rhs = s.flow(ExtScalar::Finite(z1 + z2), &x)?;
        Ok(Sample::Residual { value: chordal_distance(&lhs, &rhs)?, worst: WorstCase::new(x, vec![z1, z2]) })
    })
}

/// `(1/n)·φ(nx)` against the `n`-fold iterate `φ∘…∘φ(x)`.
pub fn verify_iterate_identity<T: Real>(
    s: &Solution<T>,
    n: usize,
    budget: Budget,
    seed: u64,
    bx: &SamplingBox<T>,
) -> Result<VerificationReport<T>> {
    if n == 0 {
        return Err(Error::InvalidValue("iterate count must be >= 1".into()));
    }
    let k = require_dim(s)?;
    let nn = T::from_usize(n).unwrap();
    sweep(seed, budget, |rng| {
        let x = bx.point(rng, k);
        let nx = x.scaled(nn)?;
        if near_singular(s, &[&nx]) {
            return Ok(Sample::Excluded);
        }
        let mut it = x.clone();
        for _ in 0..n {
            if near_singular(s, &[&it]) {
                return Ok(Sample::Excluded);
            }
            it = s.eval(&it)?;
        }
        let lhs = s.eval(&nx)?.scaled(T::one() / nn)?;
        Ok(Sample::Residual { value: chordal_distance(&lhs, &it)?, worst: WorstCase::new(x, vec![nn]) })
    })
}

/// Largest chordal defect of `φ(a z) = a·z/(z+1)` over `zs`, where
/// `a = φ(∞)` must be finite.
pub fn axis_action_residual<T: Real>(s: &Solution<T>, zs: &[T]) -> Result<T> {
    let a = s.exceptional_vector()?;
    if a.is_infinity() {
        return Err(Error::InvalidValue("exceptional vector is infinite".into()));
    }
    let mut worst = T::zero();
    for &z in zs {
        let lhs = s.eval(&a.scaled(z)?)?;
        let rhs = scale(&a, ExtScalar::from(z / (z + T::one())))?;
        let d = chordal_distance(&lhs, &rhs)?;
        worst = if d.is_nan() { T::infinity() } else { worst.max(d) };
    }
    Ok(worst)
}

fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

/// `φ_{a,Q} ∘ φ_{b,Q} = φ_{a+b,Q}`: returns the quadratic-form flow of `a+b`.
pub fn quadflow_compose<T: Real>(a: &[T], b: &[T], q: &QuadraticForm<T>) -> Result<Solution<T>> {
    Solution::quad_flow(a.to_vec(), q.clone())?;
    Solution::quad_flow(b.to_vec(), q.clone())?;
    let ab = add(a, b);
    let qab = q.eval_q(&ab)?;
    let scale = q.matrix().max_abs() * (norm(a) + norm(b)).powi(2);
    if qab.abs() <= T::lit(1e-14) * scale {
        return Err(Error::DegenerateDirection);
    }
    Solution::quad_flow(ab, q.clone())
}

/// Chordal distance between `φ_{a+b,Q}(x)` and `φ_{a,Q}(φ_{b,Q}(x))`.
pub fn compose_two_path_residual<T: Real>(a: &[T], b: &[T], q: &QuadraticForm<T>, x: &Point<T>) -> Result<T> {
    let direct = quadflow_compose(a, b, q)?.eval(x)?;
    let fa = Solution::quad_flow(a.to_vec(), q.clone())?;
    let fb = Solution::quad_flow(b.to_vec(), q.clone())?;
    let two_step = fa.eval(&fb.eval(x)?)?;
    chordal_distance(&direct, &two_step)
}

/// Both sides of `Q(bQ(x)+x) = 𝒯·Q(x)` with `𝒯 = Q(x)Q(b) + B(x,b) + 1`.
pub fn tarp_identity_check<T: Real>(b: &[T], q: &QuadraticForm<T>, x: &[T]) -> Result<(T, T)> {
    let qx = q.eval_q(x)?;
    let v: Vec<T> = b.iter().zip(x).map(|(bi, xi)| *bi * qx + *xi).collect();
    let lhs = q.eval_q(&v)?;
    let t = qx * q.eval_q(b)? + q.bilinear(x, b)? + T::one();
    Ok((lhs, t * qx))
}

/// `ℓ⁻¹ ∘ s ∘ ℓ`.
pub fn conjugate<T: Real>(s: Solution<T>, ell: Homothety<T>) -> Result<Solution<T>> {
    Solution::conjugated(s, ell)
}

/// Closed form of `ℓ⁻¹ ∘ s ∘ ℓ`, where one is known.
pub fn closed_form_conjugate<T: Real>(s: &Solution<T>, ell: &Homothety<T>) -> Option<Solution<T>> {
    match (s, ell) {
        (Solution::Identity { k }, _) => Some(Solution::identity(*k)),
        (Solution::Zero { k }, _) => Some(Solution::zero(*k)),
        (Solution::QuadFlow { a, q }, Homothety::Linear { matrix, inverse }) => {
            Solution::quad_flow(inverse.mul_vec(a).ok()?, q.pullback(matrix).ok()?).ok()
        }
        (Solution::QuadFlow { a, q }, Homothety::Scalar(c)) => {
            Solution::quad_flow(a.iter().map(|v| *v / *c).collect(), q.scaled(*c * *c)).ok()
        }
        (Solution::Canonical1 { k }, Homothety::Linear { .. } | Homothety::Scalar(_)) => {
            let kk = T::from_usize(*k)?;
            let q = QuadraticForm::new(Matrix::diagonal(&vec![T::one() / kk; *k]));
            closed_form_conjugate(&Solution::quad_flow(vec![T::one(); *k], q).ok()?, ell)
        }
        (Solution::Catalog(CatalogEntry::Pvz5), Homothety::Circle) => Some(Solution::catalog(CatalogEntry::Pvz6)),
        (Solution::Catalog(CatalogEntry::Pvz1 { a, b }), Homothety::Astroid) if *a == T::one() && *b == T::one() => {
            Some(Solution::catalog(CatalogEntry::Pvz7))
        }
        _ => None,
    }
}

/// Largest chordal gap between `M⁻¹ ∘ φ_{a,Q} ∘ M` and `φ_{M⁻¹a, Q∘M}` over
/// seeded points of the default box.
pub fn conjugate_linear_identity_check<T: Real>(
    a: &[T],
    q: &QuadraticForm<T>,
    m: &Matrix<T>,
    n_samples: usize,
    seed: u64,
) -> Result<T> {
    let ell = Homothety::linear(m.clone())?;
    let base = Solution::quad_flow(a.to_vec(), q.clone())?;
    let Homothety::Linear { inverse, .. } = &ell else { unreachable!() };
    let direct = Solution::quad_flow(inverse.mul_vec(a)?, q.pullback(m)?)?;
    let conj = Solution::conjugated(base, ell)?;
    let bx = SamplingBox::default();
    let k = a.len();
    let report = sweep(seed, Budget::Requested(n_samples), |rng| {
        let x = bx.point(rng, k);
        if near_singular(&direct, &[&x]) {
            return Ok(Sample::Excluded);
        }
        let d = chordal_distance(&conj.eval(&x)?, &direct.eval(&x)?)?;
        Ok(Sample::Residual { value: d, worst: WorstCase::new(x, vec![]) })
    })?;
    Ok(report.max_residual)
}

/// Outcome of [`commuting_product_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingReport<T> {
    /// Residuals of `g∘h` against `h∘g`.
    pub commutation: VerificationReport<T>,
    pub commute: bool,
    /// Translation-equation residuals of `g∘h`, when the pair commutes.
    pub translation: Option<VerificationReport<T>>,
}

/// Checks whether `g` and `h` commute on seeded samples and, if so, whether
/// their composite satisfies the translation equation.
pub fn commuting_product_check<T: Real>(
    g: &Solution<T>,
    h: &Solution<T>,
    budget: Budget,
    seed: u64,
    tol: T,
) -> Result<CommutingReport<T>> {
    let product = Solution::product(g.clone(), h.clone())?;
    let k = require_dim(&product)?;
    let bx = SamplingBox::default();
    let commutation = sweep(seed, budget, |rng| {
        let x = bx.point(rng, k);
        if near_singular(g, &[&x]) || near_singular(h, &[&x]) {
            return Ok(Sample::Excluded);
        }
        let hx = h.eval(&x)?;
        let gx = g.eval(&x)?;
        if near_singular(g, &[&hx]) || near_singular(h, &[&gx]) {
            return Ok(Sample::Excluded);
        }
        let d = chordal_distance(&g.eval(&hx)?, &h.eval(&gx)?)?;
        Ok(Sample::Residual { value: d, worst: WorstCase::new(x, vec![]) })
    })?
    .with_tol(tol);
    let commute = commutation.passed();
    let translation = if commute { Some(verify_translation(&product, budget, seed, &bx, tol)?) } else { None };
    Ok(CommutingReport { commutation, commute, translation })
}

/// Outcome of [`surjectivity_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct SurjectivityReport<T> {
    pub total: usize,
    pub hits: usize,
    /// Indices of targets whose preimage candidate missed.
    pub misses: Vec<usize>,
    /// Preimage candidate `φ^{-1}(y) = -φ(-y)` per target.
    pub preimages: Vec<Point<T>>,
}

impl<T> SurjectivityReport<T> {
    pub fn hit_rate(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        self.hits as f64 / self.total as f64
    }
}

/// For each target `y`, takes `x = φ^{-1}(y)` (the flow at `z = -1`) and
/// records a hit when `φ(x)` is within `tol` chordal of `y`.
pub fn surjectivity_probe<T: Real>(s: &Solution<T>, targets: &[Point<T>], tol: T) -> Result<SurjectivityReport<T>> {
    if s.is_zero() || !s.is_continuous() {
        return Err(Error::InvalidValue("surjectivity probe needs a nonzero continuous solution".into()));
    }
    let mut report = SurjectivityReport { total: targets.len(), hits: 0, misses: Vec::new(), preimages: Vec::new() };
    for (i, y) in targets.iter().enumerate() {
        let x = s.flow(ExtScalar::Finite(-T::one()), y)?;
        let d = chordal_distance(&s.eval(&x)?, y)?;
        if d < tol {
            report.hits += 1;
        } else {
            report.misses.push(i);
        }
        report.preimages.push(x);
    }
    Ok(report)
}
