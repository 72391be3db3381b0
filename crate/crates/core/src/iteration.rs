//! Scaled iteration `L_n(x) = n·g∘ⁿ(x/n)` and estimation of its limit.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{norm, Real};
use crate::space::{chordal_distance, Point};

/// Iterates whose norm exceeds this are treated as escaping.
pub const DIVERGENCE_BOUND: f64 = 1e12;
/// Highest total degree accepted in a [`PolyMap`].
pub const MAX_DEGREE: u32 = 6;

/// `coeff · Π x_i^{exps_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial<T> {
    pub coeff: T,
    pub exps: Vec<u32>,
}

/// Polynomial self-map of `R^k` fixing the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap<T> {
    k: usize,
    components: Vec<Vec<Monomial<T>>>,
}

/// Map being iterated.
#[derive(Debug, Clone, PartialEq)]
pub enum IterMap<T> {
    /// `g(x) = log(1+x)` on `R`.
    Log1p,
    /// `g(x,y) = (x - x²/2 + y²/2, y - xy)`, whose scaled limit is `pvz5`.
    Quad2D,
    Poly(PolyMap<T>),
}

/// Outcome of [`estimate_limit`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate<T> {
    pub value: Point<T>,
    /// `(n, L_n(x))` with strictly increasing `n`.
    pub history: Vec<(usize, Point<T>)>,
    pub converged: bool,
    /// `log2` of the ratio of successive differences; about 1 for `O(1/n)`.
    pub rate_estimate: T,
}

impl<T: Real> PolyMap<T> {
    pub fn new(k: usize, components: Vec<Vec<Monomial<T>>>) -> Result<Self> {
        if k == 0 || components.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: components.len() });
        }
        for m in components.iter().flatten() {
            if m.exps.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: m.exps.len() });
            }
            if !m.coeff.is_finite() {
                return Err(Error::InvalidValue("polynomial coefficients must be finite".into()));
            }
            let deg: u32 = m.exps.iter().sum();
            if deg > MAX_DEGREE {
                return Err(Error::InvalidValue(format!("degree {deg} exceeds the cap of {MAX_DEGREE}")));
            }
            if deg == 0 && m.coeff != T::zero() {
                return Err(Error::InvalidValue("polynomial map must fix the origin (no constant terms)".into()));
            }
        }
        Ok(Self { k, components })
    }

    /// Parses components separated by `;`, each a sum of terms such as
    /// `-0.5*x1^2`, `x1*x2`, `3`. Variables are `x1 … xk`.
    pub fn parse(k: usize, text: &str) -> Result<Self> {
        let comps: Vec<&str> = text.split(';').map(str::trim).collect();
        let mut components = Vec::with_capacity(comps.len());
        for c in comps {
            components.push(parse_polynomial(k, c)?);
        }
        Self::new(k, components)
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.components
            .iter()
            .map(|terms| {
                terms.iter().fold(T::zero(), |acc, m| {
                    let prod = m.exps.iter().zip(x).fold(m.coeff, |p, (e, xi)| p * xi.powi(*e as i32));
                    acc + prod
                })
            })
            .collect()
    }
}

fn parse_polynomial<T: Real>(k: usize, text: &str) -> Result<Vec<Monomial<T>>> {
    let err = |m: &str| Error::Parse(format!("polynomial '{text}': {m}"));
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        if ch != '+' && ch != '-' {
            cur.push(ch);
            continue;
        }
        let mut tail = cur.chars().rev();
        let in_exponent =
            matches!(tail.next(), Some('e' | 'E')) && tail.next().is_some_and(|c| c.is_ascii_digit() || c == '.');
        if in_exponent {
            cur.push(ch);
        } else if cur.is_empty() {
            neg ^= ch == '-';
        } else {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        }
    }
    if !cur.is_empty() {
        terms.push((neg, cur));
    } else if !terms.is_empty() || neg {
        return Err(err("dangling operator"));
    }
    if terms.is_empty() {
        return Err(err("empty component"));
    }
    let mut out = Vec::new();
    for (neg, term) in terms {
        let mut coeff = if neg { -T::one() } else { T::one() };
        let mut exps = vec![0u32; k];
        for factor in term.split('*') {
            if let Some(var) = factor.strip_prefix('x') {
                let (idx, pow) = match var.split_once('^') {
                    Some((i, p)) => (i, p.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (var, 1),
                };
                let i: usize = idx.parse().map_err(|_| err("bad variable index"))?;
                if i == 0 || i > k {
                    return Err(err("variable index out of range"));
                }
                exps[i - 1] += pow;
            } else {
                let v: f64 = factor.parse().map_err(|_| err("bad coefficient"))?;
                coeff *= T::lit(v);
            }
        }
        out.push(Monomial { coeff, exps });
    }
    Ok(out)
}

impl<T: Real> IterMap<T> {
    pub fn dim(&self) -> usize {
        match self {
            IterMap::Log1p => 1,
            IterMap::Quad2D => 2,
            IterMap::Poly(p) => p.dim(),
        }
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        match self {
            IterMap::Log1p => vec![x[0].ln_1p()],
            IterMap::Quad2D => {
                let (u, v) = (x[0], x[1]);
                let half = T::lit(0.5);
                vec![u - half * u * u + half * v * v, v - u * v]
            }
            IterMap::Poly(p) => p.apply(x),
        }
    }
}

impl<T: Real> fmt::Display for IterMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IterMap::Log1p => f.write_str("log1p"),
            IterMap::Quad2D => f.write_str("quad2d"),
            IterMap::Poly(p) => write!(f, "poly(k={})", p.k),
        }
    }
}

/// `L_n(x) = n·g∘ⁿ(x/n)` by exact `n`-fold composition.
pub fn scaled_iterate<T: Real>(g: &IterMap<T>, x: &[T], n: usize) -> Result<Point<T>> {
    if n == 0 {
        return Err(Error::InvalidValue("n must be >= 1".into()));
    }
    if x.len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: x.len() });
    }
    let nn = T::from_usize(n).unwrap();
    let bound = T::lit(DIVERGENCE_BOUND);
    let mut v: Vec<T> = x.iter().map(|c| *c / nn).collect();
    for step in 1..=n {
        v = g.apply(&v);
        let nv = norm(&v);
        if v.iter().any(|c| c.is_nan()) || nv.is_nan() || nv > bound {
            return Err(Error::IterateDiverged { step });
        }
    }
    let out: Vec<T> = v.iter().map(|c| *c * nn).collect();
    if norm(&out) > bound {
        return Err(Error::IterateDiverged { step: n });
    }
    Ok(Point::Finite(out))
}

/// Evaluates `L_n(x)` on `n = n0·2^j`, `j = 0..levels`, and judges
/// convergence by the chordal distance of the last two levels.
pub fn estimate_limit<T: Real>(g: &IterMap<T>, x: &[T], n0: usize, levels: usize, tol: T) -> Result<LimitEstimate<T>> {
    if n0 == 0 || levels < 2 {
        return Err(Error::InvalidValue("need n0 >= 1 and levels >= 2".into()));
    }
    let ns: Vec<usize> = (0..levels)
        .map(|j| n0.checked_shl(j as u32).filter(|n| n >> j == n0))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidValue("n schedule overflows".into()))?;
    let values: Vec<Point<T>> = ns.par_iter().map(|&n| scaled_iterate(g, x, n)).collect::<Result<_>>()?;
    let history: Vec<(usize, Point<T>)> = ns.into_iter().zip(values).collect();
    let last = &history[levels - 1].1;
    let converged = chordal_distance(&history[levels - 2].1, last)? < tol;
    let rate_estimate = if levels >= 3 {
        let diff = |a: &Point<T>, b: &Point<T>| {
            let (a, b) = (a.coords().unwrap(), b.coords().unwrap());
            norm(&a.iter().zip(b).map(|(u, v)| *u - *v).collect::<Vec<_>>())
        };
        let d1 = diff(&history[levels - 3].1, &history[levels - 2].1);
        let d2 = diff(&history[levels - 2].1, last);
        (d1 / d2).log2()
    } else {
        T::nan()
    };
    Ok(LimitEstimate { value: last.clone(), history, converged, rate_estimate })
}
