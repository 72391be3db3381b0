//! One-dimensional solutions `f(x) = x/(Cx+1)` on `(0, ∞)`.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::sampling::{sweep, uniform, Budget, Sample, VerificationReport, WorstCase};
use crate::scalar::Real;
use crate::space::Point;

/// `f(x) = x/(Cx+1)` with `C >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneDSolution<T> {
    c: T,
}

/// Result of [`fit_c`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitC<T> {
    pub c: T,
    /// Largest deviation of a per-sample `1/f(u) - 1/u` from `c`.
    pub constancy_residual: T,
}

impl<T: Real> FitC<T> {
    /// The samples are consistent with a single `C`.
    pub fn is_valid(&self) -> bool {
        self.constancy_residual <= T::lit(1e-8) * (T::one() + self.c)
    }
}

impl<T: Real> OneDSolution<T> {
    pub fn new(c: T) -> Result<Self> {
        if !c.is_finite() || c < T::zero() {
            return Err(Error::InvalidValue(format!("C must be finite and >= 0, got {c}")));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn f_eval(&self, x: T) -> Result<T> {
        if x <= T::zero() || !x.is_finite() {
            return Err(Error::NonPositiveInput(x.as_f64()));
        }
        Ok(x / (self.c * x + T::one()))
    }
}

/// Max of `|(1-z)f(x) - f(f(xz)(1-z)/z)|` over `x` in `(0, 100]`, `z` in `(0, 1)`.
pub fn verify_1d<T: Real>(sol: &OneDSolution<T>, n_samples: usize, seed: u64, tol: T) -> Result<VerificationReport<T>> {
    if tol.is_nan() || tol <= T::zero() {
        return Err(Error::InvalidValue("tolerance must be positive".into()));
    }
    let report = sweep(seed, Budget::Requested(n_samples), |rng| {
        let x = T::lit(100.0) * (T::one() - uniform(rng, T::zero(), T::one()));
        let z = loop {
            let z = uniform(rng, T::zero(), T::one());
            if z > T::zero() {
                break z;
            }
        };
        let lhs = (T::one() - z) * sol.f_eval(x)?;
        let rhs = sol.f_eval(sol.f_eval(x * z)? * (T::one() - z) / z)?;
        Ok(Sample::Residual { value: (lhs - rhs).abs(), worst: WorstCase::new(Point::Finite(vec![x]), vec![z]) })
    })?;
    Ok(report.with_tol(tol))
}

/// Recovers `C` as the median of `1/f(u) - 1/u`.
pub fn fit_c<T: Real>(samples: &[(T, T)]) -> Result<FitC<T>> {
    if samples.len() < 2 {
        return Err(Error::InvalidValue("fit needs at least two samples".into()));
    }
    let mut cs = Vec::with_capacity(samples.len());
    for &(u, fu) in samples {
        for v in [u, fu] {
            if v <= T::zero() || !v.is_finite() {
                return Err(Error::NonPositiveInput(v.as_f64()));
            }
        }
        if fu > u {
            return Err(Error::NotAOneDSolution { u: u.as_f64(), fu: fu.as_f64() });
        }
        cs.push(T::one() / fu - T::one() / u);
    }
    cs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = cs.len() / 2;
    let c = if cs.len() % 2 == 1 { cs[m] } else { (cs[m - 1] + cs[m]) / T::lit(2.0) };
    let constancy_residual = cs.iter().fold(T::zero(), |acc, v| acc.max((*v - c).abs()));
    Ok(FitC { c, constancy_residual })
}

/// Reads `u,fu` rows; a non-numeric first row is taken as a header.
pub fn read_pairs_csv<T: Real, R: BufRead>(reader: R) -> Result<Vec<(T, T)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!("line {}: expected 2 fields, found {}", i + 1, fields.len())));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(u), Ok(fu)) => out.push((T::lit(u), T::lit(fu))),
            _ if i == 0 && out.is_empty() => continue,
            _ => return Err(Error::Parse(format!("line {}: not a number pair", i + 1))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        assert_eq!(OneDSolution::new(0.0).unwrap().f_eval(5.0).unwrap(), 5.0);
        assert_eq!(OneDSolution::new(1.0).unwrap().f_eval(1.0).unwrap(), 0.5);
        assert_eq!(OneDSolution::new(0.5).unwrap().f_eval(2.0).unwrap(), 1.0);
        assert_eq!(OneDSolution::new(1.0).unwrap().f_eval(0.0), Err(Error::NonPositiveInput(0.0)));
        assert!(OneDSolution::new(-0.1f64).is_err());
    }

    #[test]
    fn hand_residual() {
        let f = OneDSolution::new(0.5f64).unwrap();
        let (x, z) = (2.0, 0.5);
        let lhs = (1.0 - z) * f.f_eval(x).unwrap();
        let rhs = f.f_eval(f.f_eval(x * z).unwrap() * (1.0 - z) / z).unwrap();
        assert!((lhs - 0.5).abs() < 1e-15 && (rhs - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sweeps_pass() {
        for c in [0.0, 3.0] {
            let r = verify_1d(&OneDSolution::new(c).unwrap(), 10_000, 1, 1e-12).unwrap();
            assert!(r.passed(), "C={c}: {}", r.max_residual);
        }
    }

    #[test]
    fn fit_examples() {
        let pts: Vec<(f64, f64)> = (1..20).map(|i| i as f64 * 0.7).map(|u| (u, u / (3.0 * u + 1.0))).collect();
        let fit = fit_c(&pts).unwrap();
        assert!((fit.c - 3.0).abs() < 1e-12 && fit.constancy_residual <= 1e-12 && fit.is_valid());
        let fit = fit_c(&[(1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(fit.c, 0.0);
        assert_eq!(fit_c(&[(1.0, 2.0), (2.0, 1.0)]), Err(Error::NotAOneDSolution { u: 1.0, fu: 2.0 }));
    }

    #[test]
    fn csv_reader() {
        let text = "u,fu\n1,0.5\n2, 1\n";
        let v: Vec<(f64, f64)> = read_pairs_csv(text.as_bytes()).unwrap();
        assert_eq!(v, vec![(1.0, 0.5), (2.0, 1.0)]);
        assert!(read_pairs_csv::<f64, _>("1,2\nx,y\n".as_bytes()).is_err());
    }
}
