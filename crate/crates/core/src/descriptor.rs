//! One-line textual descriptors for solutions, homotheties, vectors and points.
//!
//! ```text
//! identity [k=N]            zero [k=N]           canonical1 [k=N]
//! canonicalinf d=V          quadflow a=V Q=V     linflow c=V L=V
//! catalog NAME [a=X b=Y]    conjugated(S; H)     product(S; S)
//!
//! linear V   scalar C   circle   astroid   inv(H)   compose(H; H; ...)
//! ```
//!
//! `V` is a comma-separated list of decimals, `Q` lists the upper triangle of
//! the symmetric matrix row by row, and a point is `V` or `inf`. Every
//! `Display` output of [`Solution`] and [`Homothety`] parses back to an equal
//! value.

use crate::error::{Error, Result};
use crate::forms::{LinearForm, QuadraticForm};
use crate::homothety::Homothety;
use crate::linalg::Matrix;
use crate::scalar::Real;
use crate::solutions::{CatalogEntry, Solution};
use crate::space::Point;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_scalar<T: Real>(text: &str) -> Result<T> {
    let t = text.trim();
    let v: f64 = t.parse().map_err(|_| parse_err(format!("'{t}' is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(format!("'{t}' is not finite")));
    }
    Ok(T::lit(v))
}

pub fn parse_vector<T: Real>(text: &str) -> Result<Vec<T>> {
    let t = text.trim();
    if t.is_empty() {
        return Err(parse_err("empty vector"));
    }
    t.split(',').map(parse_scalar).collect()
}

/// A vector, or `inf` for the point at infinity.
pub fn parse_point<T: Real>(text: &str) -> Result<Point<T>> {
    if text.trim().eq_ignore_ascii_case("inf") {
        return Ok(Point::Infinity);
    }
    Point::finite(parse_vector(text)?)
}

/// Splits `name(body)` into `name` and `body`.
fn call(text: &str) -> Option<(&str, &str)> {
    let open = text.find('(')?;
    let body = text.strip_suffix(')')?;
    Some((text[..open].trim(), &body[open + 1..]))
}

/// Splits on `;` outside parentheses.
fn split_args(body: &str) -> Result<Vec<&str>> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_err("unbalanced parentheses"));
                }
            }
            ';' if depth == 0 => {
                out.push(body[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(parse_err("unbalanced parentheses"));
    }
    out.push(body[start..].trim());
    Ok(out)
}

/// `key=value` arguments following a keyword.
struct Args<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Args<'a> {
    fn parse(words: &[&'a str], allowed: &[&str]) -> Result<Self> {
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| parse_err(format!("expected key=value, found '{w}'")))?;
            if !allowed.contains(&k) {
                return Err(parse_err(format!("unexpected argument '{k}'")));
            }
            if pairs.iter().any(|(p, _)| *p == k) {
                return Err(parse_err(format!("duplicate argument '{k}'")));
            }
            pairs.push((k, v));
        }
        Ok(Self { pairs })
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn require(&self, key: &str) -> Result<&'a str> {
        self.get(key).ok_or_else(|| parse_err(format!("missing argument '{key}='")))
    }

    fn dim(&self, default_k: usize) -> Result<usize> {
        match self.get("k") {
            None => Ok(default_k),
            Some(v) => v.parse().ok().filter(|k| *k >= 1).ok_or_else(|| parse_err(format!("bad dimension '{v}'"))),
        }
    }
}

fn triangle_dim(len: usize) -> Option<usize> {
    (1..=len).find(|k| k * (k + 1) / 2 == len)
}

/// Parses a solution descriptor; `default_k` applies where `k=` is omitted.
pub fn parse_solution<T: Real>(text: &str, default_k: usize) -> Result<Solution<T>> {
    let text = text.trim();
    if let Some((name, body)) = call(text) {
        let args = split_args(body)?;
        return match (name, args.as_slice()) {
            ("conjugated", [s, h]) => Solution::conjugated(parse_solution(s, default_k)?, parse_homothety(h)?),
            ("product", [a, b]) => Solution::product(parse_solution(a, default_k)?, parse_solution(b, default_k)?),
            ("conjugated" | "product", _) => Err(parse_err(format!("{name}(..) takes two arguments separated by ';'"))),
            _ => Err(parse_err(format!("unknown solution '{name}'"))),
        };
    }
    let words: Vec<&str> = text.split_whitespace().collect();
    let Some((&head, rest)) = words.split_first() else {
        return Err(parse_err("empty solution descriptor"));
    };
    match head {
        "identity" | "zero" | "canonical1" => {
            let k = Args::parse(rest, &["k"])?.dim(default_k)?;
            Ok(match head {
                "identity" => Solution::identity(k),
                "zero" => Solution::zero(k),
                _ => Solution::canonical1(k)?,
            })
        }
        "canonicalinf" => Solution::canonical_inf(parse_vector(Args::parse(rest, &["d"])?.require("d")?)?),
        "quadflow" => {
            let args = Args::parse(rest, &["a", "Q"])?;
            let a: Vec<T> = parse_vector(args.require("a")?)?;
            let coeffs: Vec<T> = parse_vector(args.require("Q")?)?;
            let k = triangle_dim(coeffs.len()).ok_or_else(|| parse_err("Q must list k(k+1)/2 entries"))?;
            Solution::quad_flow(a, QuadraticForm::from_upper_triangle(k, &coeffs)?)
        }
        "linflow" => {
            let args = Args::parse(rest, &["c", "L"])?;
            Solution::lin_flow(parse_vector(args.require("c")?)?, LinearForm::new(parse_vector(args.require("L")?)?)?)
        }
        "catalog" => {
            let (&name, rest) = rest.split_first().ok_or_else(|| parse_err("catalog needs an entry name"))?;
            let args = Args::parse(rest, &["a", "b"])?;
            let param = |key| args.get(key).map_or(Ok(T::one()), parse_scalar);
            let entry = CatalogEntry::by_name(name, param("a")?, param("b")?)?;
            if !matches!(entry, CatalogEntry::Pvz1 { .. } | CatalogEntry::Pvz2 { .. } | CatalogEntry::Pvz3 { .. })
                && !args.pairs.is_empty()
            {
                return Err(parse_err(format!("{name} takes no parameters")));
            }
            Ok(Solution::catalog(entry))
        }
        other => Err(parse_err(format!("unknown solution '{other}'"))),
    }
}

pub fn parse_homothety<T: Real>(text: &str) -> Result<Homothety<T>> {
    let text = text.trim();
    if let Some((name, body)) = call(text) {
        let args = split_args(body)?;
        return match (name, args.as_slice()) {
            ("inv", [h]) => Ok(Homothety::Inverse(Box::new(parse_homothety(h)?))),
            ("compose", hs) if hs.len() >= 2 => {
                Ok(Homothety::Compose(hs.iter().map(|h| parse_homothety(h)).collect::<Result<_>>()?))
            }
            ("inv" | "compose", _) => Err(parse_err(format!("wrong number of arguments to {name}(..)"))),
            _ => Err(parse_err(format!("unknown homothety '{name}'"))),
        };
    }
    let (head, rest) = text.split_once(char::is_whitespace).map_or((text, ""), |(h, r)| (h, r.trim()));
    match (head, rest.is_empty()) {
        ("circle", true) => Ok(Homothety::Circle),
        ("astroid", true) => Ok(Homothety::Astroid),
        ("scalar", false) => Homothety::scalar(parse_scalar(rest)?),
        ("linear", false) => {
            let v: Vec<T> = parse_vector(rest)?;
            let n = (1..=v.len()).find(|n| n * n == v.len()).ok_or_else(|| parse_err("linear needs n*n entries"))?;
            Homothety::linear(Matrix::from_row_major(n, v)?)
        }
        _ => Err(parse_err(format!("cannot parse homothety '{text}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_descriptors() {
        let s: Solution<f64> = parse_solution("quadflow a=1,1 Q=1,0,1", 2).unwrap();
        assert_eq!(s.to_string(), "quadflow a=1,1 Q=1,0,1");
        let s: Solution<f64> = parse_solution("conjugated(catalog pvz5; circle)", 2).unwrap();
        assert_eq!(s.to_string(), "conjugated(catalog pvz5; circle)");
        let h: Homothety<f64> = parse_homothety("compose(linear 2,0,0,3; astroid)").unwrap();
        assert_eq!(h.to_string(), "compose(linear 2,0,0,3; astroid)");
        let h: Homothety<f64> = parse_homothety("inv(circle)").unwrap();
        assert_eq!(h, Homothety::Inverse(Box::new(Homothety::Circle)));
    }

    #[test]
    fn defaults_and_errors() {
        assert_eq!(parse_solution::<f64>("canonical1", 3).unwrap(), Solution::Canonical1 { k: 3 });
        assert_eq!(parse_solution::<f64>("identity k=4", 2).unwrap(), Solution::Identity { k: 4 });
        assert!(parse_solution::<f64>("quadflow a=1,0 Q=0,0,1", 2).is_err());
        assert!(parse_solution::<f64>("catalog pvz9", 2).is_err());
        assert!(parse_solution::<f64>("catalog pvz5 a=2", 2).is_err());
        assert!(parse_solution::<f64>("conjugated(catalog pvz5)", 2).is_err());
        assert!(parse_homothety::<f64>("linear 1,2,3").is_err());
        assert!(parse_homothety::<f64>("scalar 0").is_err());
        assert_eq!(parse_point::<f64>("inf").unwrap(), Point::Infinity);
        assert_eq!(parse_point::<f64>("-1,2.5").unwrap(), Point::Finite(vec![-1.0, 2.5]));
        assert!(parse_point::<f64>("1,,2").is_err());
    }
}
