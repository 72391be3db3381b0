//! Seeded, order-independent sampling harness shared by every numerical check.
//!
//! Sample `i` of a run seeded with `s` is drawn from a ChaCha8 stream keyed by
//! `(s, i)` alone, so results do not depend on thread count or evaluation
//! order. Aggregation is a max with ties going to the lowest index.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::space::Point;

pub type SampleRng = ChaCha8Rng;

/// Chordal radius around declared singular sets inside which draws are rejected.
pub const EXCLUSION_RADIUS: f64 = 1e-3;

/// Generator for sample `index` of the run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn uniform<T: Real>(rng: &mut SampleRng, lo: T, hi: T) -> T {
    let u: f64 = rng.random();
    lo + (hi - lo) * T::lit(u)
}

pub fn uniform_vec<T: Real>(rng: &mut SampleRng, k: usize, lo: T, hi: T) -> Vec<T> {
    (0..k).map(|_| uniform(rng, lo, hi)).collect()
}

/// Coordinate box for `x` and interval for `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingBox<T> {
    pub coord_lo: T,
    pub coord_hi: T,
    pub z_lo: T,
    pub z_hi: T,
}

impl<T: Real> Default for SamplingBox<T> {
    fn default() -> Self {
        Self { coord_lo: T::lit(-3.0), coord_hi: T::lit(3.0), z_lo: T::lit(0.05), z_hi: T::lit(0.95) }
    }
}

impl<T: Real> SamplingBox<T> {
    pub fn point(&self, rng: &mut SampleRng, k: usize) -> Point<T> {
        Point::Finite(uniform_vec(rng, k, self.coord_lo, self.coord_hi))
    }

    pub fn z(&self, rng: &mut SampleRng) -> T {
        uniform(rng, self.z_lo, self.z_hi)
    }
}

/// How many samples a sweep draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// Exactly this many draws; excluded draws count against it.
    Requested(usize),
    /// Keep drawing until this many draws are admissible (at most 100x as many).
    Admissible(usize),
}

impl Budget {
    pub fn target(self) -> usize {
        match self {
            Budget::Requested(n) | Budget::Admissible(n) => n,
        }
    }
}

/// Result of evaluating one draw.
#[derive(Debug, Clone)]
pub enum Sample<T> {
    Excluded,
    Residual { value: T, worst: WorstCase<T> },
}

/// Location of a residual: the point and the flow parameters used.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase<T> {
    pub x: Point<T>,
    pub z: Vec<T>,
}

impl<T: Real> WorstCase<T> {
    pub fn new(x: Point<T>, z: Vec<T>) -> Self {
        Self { x, z }
    }
}

/// Aggregate of a sampled residual check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<T> {
    pub samples_tested: usize,
    pub excluded: usize,
    pub max_residual: T,
    pub worst_case: Option<WorstCase<T>>,
    /// Pass threshold, when the check has one.
    pub tol: Option<T>,
}

impl<T: Real> VerificationReport<T> {
    pub fn passes(&self, tol: T) -> bool {
        self.max_residual <= tol
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = Some(tol);
        self
    }

    /// `max_residual <= tol`; vacuously true without a threshold.
    pub fn passed(&self) -> bool {
        self.tol.is_none_or(|t| self.passes(t))
    }
}

impl<T: Real> fmt::Display for VerificationReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples_tested={}", self.samples_tested)?;
        writeln!(f, "excluded={}", self.excluded)?;
        writeln!(f, "max_residual={:e}", self.max_residual)?;
        if let Some(w) = &self.worst_case {
            write!(f, "worst_x={}", w.x)?;
            let zs: Vec<String> = w.z.iter().map(|z| z.to_string()).collect();
            writeln!(f, " worst_z={}", zs.join(","))?;
        }
        if let Some(t) = self.tol {
            writeln!(f, "tol={t:e}")?;
            writeln!(f, "status={}", if self.passed() { "pass" } else { "fail" })?;
        }
        Ok(())
    }
}

fn evaluate<T, F>(seed: u64, range: std::ops::Range<usize>, f: &F) -> Vec<Result<Sample<T>>>
where
    T: Real,
    F: Fn(&mut SampleRng) -> Result<Sample<T>> + Sync,
{
    range
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            f(&mut rng)
        })
        .collect()
}

/// Runs `f` on seeded draws and keeps the largest residual.
///
/// NaN residuals count as infinite. Errors from `f` abort the sweep (the
/// lowest-index error wins).
pub fn sweep<T, F>(seed: u64, budget: Budget, f: F) -> Result<VerificationReport<T>>
where
    T: Real,
    F: Fn(&mut SampleRng) -> Result<Sample<T>> + Sync,
{
    let mut report =
        VerificationReport { samples_tested: 0, excluded: 0, max_residual: T::zero(), worst_case: None, tol: None };
    let absorb = |r: Result<Sample<T>>, report: &mut VerificationReport<T>| -> Result<()> {
        match r? {
            Sample::Excluded => report.excluded += 1,
            Sample::Residual { value, worst } => {
                let v = if value.is_nan() { T::infinity() } else { value };
                if report.worst_case.is_none() || v > report.max_residual {
                    report.max_residual = v;
                    report.worst_case = Some(worst);
                }
                report.samples_tested += 1;
            }
        }
        Ok(())
    };
    match budget {
        Budget::Requested(n) => {
            for r in evaluate(seed, 0..n, &f) {
                absorb(r, &mut report)?;
            }
        }
        Budget::Admissible(n) => {
            let cap = n.saturating_mul(100);
            let mut start = 0;
            'outer: while report.samples_tested < n && start < cap {
                let chunk = (n - report.samples_tested).max(64);
                let end = (start + chunk).min(cap);
                for r in evaluate(seed, start..end, &f) {
                    absorb(r, &mut report)?;
                    if report.samples_tested == n {
                        break 'outer;
                    }
                }
                start = end;
            }
        }
    }
    if report.samples_tested == 0 {
        return Err(Error::AllSamplesExcluded { requested: budget.target() });
    }
    Ok(report)
}
