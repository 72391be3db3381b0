use proptest::prelude::*;

use flowlab::descriptor::{parse_homothety, parse_solution};
use flowlab::homothety::check_homogeneity;
use flowlab::iteration::{estimate_limit, IterMap};
use flowlab::oned::OneDSolution;
use flowlab::orbits::{line_repset_check, linear_grid, orbit_trace, repset_solve_phi1};
use flowlab::space::stereographic;
use flowlab::{
    chordal_distance, CatalogEntry, ExtScalar, Homothety, LinearForm, Matrix, Point, QuadraticForm, Solution,
};

fn vec_of(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, k)
}

fn point(k: usize) -> impl Strategy<Value = Point<f64>> {
    prop_oneof![9 => vec_of(k).prop_map(Point::Finite), 1 => Just(Point::Infinity)]
}

fn homothety() -> impl Strategy<Value = Homothety<f64>> {
    let leaf = prop_oneof![
        Just(Homothety::Circle),
        Just(Homothety::Astroid),
        (0.1f64..4.0).prop_map(|c| Homothety::scalar(c).unwrap()),
        (0.0f64..6.0, 0.5f64..2.0).prop_map(|(t, s)| {
            let r = Matrix::rotation2(t);
            let m = Matrix::from_row_major(2, r.row_major().iter().map(|v| v * s).collect()).unwrap();
            Homothety::linear(m).unwrap()
        }),
    ];
    leaf.prop_recursive(2, 6, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|h| Homothety::Inverse(Box::new(h))),
            prop::collection::vec(inner, 2..4).prop_map(Homothety::Compose),
        ]
    })
}

fn solution2() -> impl Strategy<Value = Solution<f64>> {
    let leaf = prop_oneof![
        Just(Solution::identity(2)),
        Just(Solution::zero(2)),
        Just(Solution::canonical1(2).unwrap()),
        (-3.0f64..3.0).prop_map(|d| Solution::canonical_inf(vec![d, -d]).unwrap()),
        (vec_of(2), 0.1f64..3.0, -0.5f64..0.5, 0.1f64..3.0).prop_filter_map("Q(a) != 0", |(a, p, q, r)| {
            Solution::quad_flow(a, QuadraticForm::from_upper_triangle(2, &[p, q, r]).unwrap()).ok()
        }),
        (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_filter_map("L != 0", |(t, l1, l2)| {
            let l = LinearForm::new(vec![l1, l2]).ok()?;
            Solution::lin_flow(vec![-l2 * t, l1 * t], l).ok()
        }),
        (0usize..8, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(i, a, b)| {
            Solution::catalog(CatalogEntry::by_name(CatalogEntry::<f64>::NAMES[i], a, b).unwrap())
        }),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), homothety()).prop_map(|(s, h)| Solution::conjugated(s, h).unwrap()),
            (inner.clone(), inner).prop_map(|(a, b)| Solution::product(a, b).unwrap()),
        ]
    })
}

proptest! {
    #[test]
    fn solution_descriptor_round_trip(s in solution2()) {
        let text = s.to_string();
        let back: Solution<f64> = parse_solution(&text, 2).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn homothety_descriptor_round_trip(h in homothety()) {
        let back: Homothety<f64> = parse_homothety(&h.to_string()).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn chordal_is_a_bounded_metric(p in point(3), q in point(3), r in point(3)) {
        let d = |a: &Point<f64>, b: &Point<f64>| chordal_distance(a, b).unwrap();
        prop_assert!(d(&p, &p) <= 1e-15);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() <= 1e-15);
        prop_assert!(d(&p, &q) <= 2.0 + 1e-15);
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-12);
    }

    #[test]
    fn chordal_matches_stereographic_embedding(p in point(2), q in point(2)) {
        let (u, v) = (stereographic(&p, 2), stereographic(&q, 2));
        let e = u.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        prop_assert!((e - chordal_distance(&p, &q).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn t_coordinate_shift(x in vec_of(2), z in -4.0f64..4.0) {
        let s = Solution::canonical1(2).unwrap();
        let x = Point::Finite(x);
        prop_assume!(z.abs() > 0.05 && (z + 1.0).abs() > 0.05);
        prop_assume!(s.singular_distance(&x.scaled(z).unwrap()) > 1e-3);
        prop_assume!(s.singular_distance(&x.scaled(z + 1.0).unwrap()) > 1e-3);
        let lhs = s.flow(ExtScalar::Finite(1.0), &s.flow(ExtScalar::Finite(z), &x).unwrap()).unwrap();
        let rhs = s.flow(ExtScalar::Finite(z + 1.0), &x).unwrap();
        prop_assert!(chordal_distance(&lhs, &rhs).unwrap() <= 1e-9);
    }

    #[test]
    fn one_d_ratio_is_non_increasing(c in 0.0f64..20.0, mut xs in prop::collection::vec(1e-6f64..1e8, 2..50)) {
        let f = OneDSolution::new(c).unwrap();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let r: Vec<f64> = xs.iter().map(|x| f.f_eval(*x).unwrap() / x).collect();
        prop_assert!(r.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(r.iter().all(|v| *v > 0.0 && *v <= 1.0));
    }

    #[test]
    fn homotheties_are_homogeneous(h in homothety(), seed in 0u64..1000) {
        let r = check_homogeneity(&h, 2, 50, seed).unwrap();
        prop_assert!(r <= 1e-9, "{} residual {}", h, r);
    }
}

/// The scalar equation for `z` in its unreduced form:
/// `Σ (y_j - Y(1 - z y_j)/(k - zY))² - kY/(kz - z²Y)`, on `z` strictly
/// between `0` and `k/Y`.
fn scalar_equation(y: &[f64], z: f64) -> f64 {
    let k = y.len() as f64;
    let big_y: f64 = y.iter().sum();
    let lhs: f64 = y.iter().map(|v| (v - big_y * (1.0 - z * v) / (k - z * big_y)).powi(2)).sum();
    lhs - k * big_y / (k * z - z * z * big_y)
}

fn bisect(y: &[f64]) -> f64 {
    let k = y.len() as f64;
    let big_y: f64 = y.iter().sum();
    let end = k / big_y;
    // g runs from -inf near 0 to +inf near k/Y
    let (mut lo, mut hi) = (end * 1e-12, end * (1.0 - 1e-12));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if scalar_equation(y, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn repset_closed_form_matches_bisection() {
    let mut rng = flowlab::sampling::sample_rng(17, 0);
    let mut checked = 0;
    while checked < 300 {
        let k = 2 + checked % 4;
        let y = flowlab::sampling::uniform_vec(&mut rng, k, -3.0, 3.0);
        let big_y: f64 = y.iter().sum();
        let mean = big_y / k as f64;
        if big_y.abs() < 1e-2 || y.iter().all(|v| (v - mean).abs() < 1e-2) {
            continue;
        }
        let r = repset_solve_phi1(&y, k).unwrap();
        let z = bisect(&y);
        assert!((r.z - z).abs() <= 1e-9 * z.abs().max(1.0), "y={y:?}: closed {} bisect {z}", r.z);
        checked += 1;
    }
}

#[test]
fn repset_round_trip_and_zero_sum() {
    let mut rng = flowlab::sampling::sample_rng(23, 0);
    for i in 0..500 {
        let k = 2 + i % 4;
        let y = flowlab::sampling::uniform_vec(&mut rng, k, -3.0, 3.0);
        let r = repset_solve_phi1(&y, k).unwrap();
        if r.at_infinity {
            continue;
        }
        let back = Solution::canonical1(k).unwrap().flow(ExtScalar::Finite(r.z), &Point::Finite(r.x.clone())).unwrap();
        assert!(chordal_distance(&back, &Point::Finite(y.clone())).unwrap() <= 1e-8);
        let norm = r.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(r.x.iter().sum::<f64>().abs() <= 1e-10 * norm);
    }
}

#[test]
fn distinct_orbits_meet_only_near_origin() {
    let s = Solution::canonical1(2).unwrap();
    let grid = linear_grid(-20.0, 20.0, 2000);
    let pairs = [([1.0, -1.0], [2.0, 0.5]), ([0.3, 2.0], [-1.5, 0.2]), ([2.0, -0.5], [-0.7, -2.5])];
    for (a, b) in pairs {
        let ta = orbit_trace(&s, &Point::Finite(a.to_vec()), &grid).unwrap();
        let tb = orbit_trace(&s, &Point::Finite(b.to_vec()), &grid).unwrap();
        for (_, p) in &ta.samples {
            if p.is_infinity() || p.norm() < 0.1 {
                continue;
            }
            for (_, q) in &tb.samples {
                if q.is_infinity() || q.norm() < 0.1 {
                    continue;
                }
                assert!(chordal_distance(p, q).unwrap() > 1e-6, "orbits of {a:?} and {b:?} meet at {p}");
            }
        }
    }
}

#[test]
fn line_representation_sets() {
    let c1 = Solution::canonical1(2).unwrap();
    for d in [[1.0, -1.0], [1.0, 0.0], [0.0, 1.0], [2.0, -0.3]] {
        let r = line_repset_check(&c1, &d, &[1.0, 1.0], 200, 5).unwrap();
        assert!(r.passed(), "{d:?}: {r:?}");
    }
    let q = Solution::quad_flow(vec![2.0, 0.0], QuadraticForm::from_upper_triangle(2, &[0.25, 0.0, 0.25]).unwrap())
        .unwrap();
    assert!(line_repset_check(&q, &[0.0, 1.0], &[2.0, 0.0], 200, 5).unwrap().passed());
}

#[test]
fn log1p_errors_shrink_along_schedule() {
    for x in [0.5f64, 1.0, 2.0, 10.0] {
        let target = 2.0 * x / (x + 2.0);
        let est = estimate_limit(&IterMap::Log1p, &[x], 1 << 10, 11, 1e-4).unwrap();
        let errs: Vec<f64> = est.history.iter().map(|(_, p)| (p.coords().unwrap()[0] - target).abs()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "x={x}: {errs:?}");
        assert!(*errs.last().unwrap() < 1e-4);
        assert!((est.rate_estimate - 1.0).abs() <= 0.2, "x={x}: rate {}", est.rate_estimate);
    }
}

#[test]
fn quad2d_rate_is_first_order() {
    for x in [[0.5f64, 0.5], [0.2, 0.7], [0.9, 0.1]] {
        let est = estimate_limit(&IterMap::Quad2D, &x, 1 << 8, 7, 1e-3).unwrap();
        assert!((est.rate_estimate - 1.0).abs() <= 0.2, "x={x:?}: rate {}", est.rate_estimate);
    }
}
