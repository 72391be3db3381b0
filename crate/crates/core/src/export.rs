//! CSV and SVG writers for iteration histories and orbit traces.

use std::io::{self, Write};

use crate::iteration::LimitEstimate;
use crate::orbits::OrbitTrace;
use crate::scalar::Real;
use crate::space::{chordal_distance, Point};

/// Side of the square SVG canvas in pixels.
pub const SVG_SIZE: f64 = 800.0;
/// Half-width of the plotted window `[-R, R]²`.
pub const SVG_HALF_WIDTH: f64 = 5.0;

fn header(first: &str, k: usize, last: &str) -> String {
    let mut cols = vec![first.to_string()];
    cols.extend((1..=k).map(|i| format!("coord_{i}")));
    cols.push(last.to_string());
    cols.join(",")
}

fn coords_fields<T: Real>(p: &Point<T>, k: usize) -> Vec<String> {
    match p.coords() {
        Some(c) => c.iter().map(|v| v.to_string()).collect(),
        None => vec![String::new(); k],
    }
}

/// `n,coord_1,...,coord_k,delta_chordal`; the first row has an empty delta.
pub fn write_history_csv<T: Real, W: Write>(est: &LimitEstimate<T>, mut w: W) -> io::Result<()> {
    let k = est.history.iter().find_map(|(_, p)| p.dim()).unwrap_or(0);
    writeln!(w, "{}", header("n", k, "delta_chordal"))?;
    let mut prev: Option<&Point<T>> = None;
    for (n, p) in &est.history {
        let mut row = vec![n.to_string()];
        row.extend(coords_fields(p, k));
        row.push(match prev {
            Some(q) => chordal_distance(q, p).map(|d| d.to_string()).unwrap_or_default(),
            None => String::new(),
        });
        writeln!(w, "{}", row.join(","))?;
        prev = Some(p);
    }
    Ok(())
}

/// `z,coord_1,...,coord_k,is_infinity`; coordinates are empty at `∞`.
pub fn write_orbit_csv<T: Real, W: Write>(trace: &OrbitTrace<T>, mut w: W) -> io::Result<()> {
    let k = trace.base.dim().or_else(|| trace.samples.iter().find_map(|(_, p)| p.dim())).unwrap_or(0);
    writeln!(w, "{}", header("z", k, "is_infinity"))?;
    for (z, p) in &trace.samples {
        let mut row = vec![z.to_string()];
        row.extend(coords_fields(p, k));
        row.push(u8::from(p.is_infinity()).to_string());
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

fn px(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn to_canvas(x: f64, y: f64) -> (f64, f64) {
    let s = SVG_SIZE / (2.0 * SVG_HALF_WIDTH);
    ((x + SVG_HALF_WIDTH) * s, (SVG_HALF_WIDTH - y) * s)
}

/// Clips segment `p→q` to the plotting window (Liang–Barsky).
fn clip(p: (f64, f64), q: (f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let r = SVG_HALF_WIDTH;
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (den, num) in [(-dx, p.0 + r), (dx, r - p.0), (-dy, p.1 + r), (dy, r - p.1)] {
        if den == 0.0 {
            if num < 0.0 {
                return None;
            }
        } else {
            let t = num / den;
            if den < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    (t0 <= t1).then_some(((p.0 + t0 * dx, p.1 + t0 * dy), (p.0 + t1 * dx, p.1 + t1 * dy)))
}

/// Planar polylines of the finite parts of each trace, clipped to the window.
fn polylines<T: Real>(trace: &OrbitTrace<T>) -> Vec<Vec<(f64, f64)>> {
    let mut lines: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    let mut flush = |current: &mut Vec<(f64, f64)>| {
        if current.len() > 1 {
            lines.push(std::mem::take(current));
        }
        current.clear();
    };
    let mut prev: Option<(f64, f64)> = None;
    for (_, p) in &trace.samples {
        let Some(c) = p.coords() else {
            flush(&mut current);
            prev = None;
            continue;
        };
        let q = (c[0].as_f64(), c[1].as_f64());
        if let Some(p0) = prev {
            match clip(p0, q) {
                Some((a, b)) => {
                    if current.last() != Some(&a) {
                        flush(&mut current);
                        current.push(a);
                    }
                    current.push(b);
                }
                None => flush(&mut current),
            }
        }
        prev = Some(q);
    }
    flush(&mut current);
    lines
}

/// SVG 1.1 plot of planar orbit traces over `[-5, 5]²`.
///
/// Samples at `∞` are omitted and counted in a caption. Traces must be
/// two-dimensional.
pub fn write_orbit_svg<T: Real, W: Write>(traces: &[OrbitTrace<T>], mut w: W) -> io::Result<()> {
    for t in traces {
        if t.samples.iter().any(|(_, p)| p.dim().is_some_and(|k| k != 2)) {
            return Err(io::Error::new(io::ErrorKind::InvalidInput, "SVG export needs planar orbits"));
        }
    }
    let size = px(SVG_SIZE);
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )?;
    writeln!(w, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#)?;
    let mid = px(SVG_SIZE / 2.0);
    writeln!(w, r##"<line x1="0.00" y1="{mid}" x2="{size}" y2="{mid}" stroke="#cccccc" stroke-width="1"/>"##)?;
    writeln!(w, r##"<line x1="{mid}" y1="0.00" x2="{mid}" y2="{size}" stroke="#cccccc" stroke-width="1"/>"##)?;
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    let mut omitted = 0;
    for (i, t) in traces.iter().enumerate() {
        omitted += t.infinite_count();
        let color = palette[i % palette.len()];
        for line in polylines(t) {
            let pts: Vec<String> = line
                .iter()
                .map(|&(x, y)| {
                    let (cx, cy) = to_canvas(x, y);
                    format!("{},{}", px(cx), px(cy))
                })
                .collect();
            writeln!(w, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "))?;
        }
    }
    if omitted > 0 {
        writeln!(
            w,
            r#"<text x="10.00" y="20.00" font-family="monospace" font-size="14">{omitted} samples at infinity omitted</text>"#
        )?;
    }
    writeln!(w, "</svg>")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(pts: Vec<(f64, Point<f64>)>) -> OrbitTrace<f64> {
        OrbitTrace { base: pts[0].1.clone(), samples: pts }
    }

    #[test]
    fn orbit_csv_layout() {
        let t = trace(vec![(0.0, Point::Finite(vec![1.0, -1.0])), (1.0, Point::Infinity)]);
        let mut out = Vec::new();
        write_orbit_csv(&t, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "z,coord_1,coord_2,is_infinity\n0,1,-1,0\n1,,,1\n");
    }

    #[test]
    fn clipping() {
        assert_eq!(clip((0.0, 0.0), (10.0, 0.0)), Some(((0.0, 0.0), (5.0, 0.0))));
        assert_eq!(clip((6.0, 6.0), (7.0, 7.0)), None);
        let t = trace(vec![
            (0.0, Point::Finite(vec![0.0, 0.0])),
            (1.0, Point::Finite(vec![10.0, 0.0])),
            (2.0, Point::Finite(vec![20.0, 0.0])),
            (3.0, Point::Finite(vec![0.0, 1.0])),
            (4.0, Point::Infinity),
            (5.0, Point::Finite(vec![1.0, 1.0])),
            (6.0, Point::Finite(vec![2.0, 1.0])),
        ]);
        let lines = polylines(&t);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], vec![(0.0, 0.0), (5.0, 0.0)]);
        assert_eq!(lines[2], vec![(1.0, 1.0), (2.0, 1.0)]);
    }

    #[test]
    fn svg_is_deterministic_and_annotated() {
        let t = trace(vec![
            (0.0, Point::Finite(vec![0.123456, 0.0])),
            (1.0, Point::Finite(vec![1.0, 1.0])),
            (2.0, Point::Infinity),
        ]);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_orbit_svg(std::slice::from_ref(&t), &mut a).unwrap();
        write_orbit_svg(std::slice::from_ref(&t), &mut b).unwrap();
        assert_eq!(a, b);
        let s = String::from_utf8(a).unwrap();
        assert!(s.contains(r#"points="409.88,400.00 480.00,320.00""#));
        assert!(s.contains("1 samples at infinity omitted"));
        assert!(s.contains(r#"width="800.00""#));
    }
}
