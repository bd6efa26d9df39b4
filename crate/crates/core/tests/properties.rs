//! Randomised invariants across the library.

use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;

use choquet::geometry::{
    extreme_points, hausdorff, sorted_vertices, support_gap_sampled, Direction, Point, Polytope,
};
use choquet::measures::{
    barycenter_gap, gamma_represents, in_l, sampled_representation_gap, weak_star_distance,
    DiscreteMeasure, RepresentingMeasureConstraint, TestFunctionFamily,
};
use choquet::parametric::{lsc_ext_audit, track_extreme_point, uniform_grid, ParametricBody};
use choquet::representation::{
    caratheodory_measure, choquet_witness, repair_witness, transport_to_extremes,
};
use choquet::selection::{
    continuous_selection, l_delta, michael_epsilon_selection, Chart, CoverWithWitnesses,
    PartitionOfUnity, Selection,
};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

fn points(dim: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), n)
        .prop_map(|v| v.into_iter().map(|c| Point::new(c).unwrap()).collect())
}

fn polytope(dim: usize) -> impl Strategy<Value = Polytope> {
    points(dim, 1..=10).prop_map(|p| Polytope::from_points(p).unwrap())
}

fn sized_polytope() -> impl Strategy<Value = Polytope> {
    (1usize..=4).prop_flat_map(polytope)
}

fn pair() -> impl Strategy<Value = (Polytope, Polytope)> {
    (1usize..=4).prop_flat_map(|d| (polytope(d), polytope(d)))
}

fn triple() -> impl Strategy<Value = (Polytope, Polytope, Polytope)> {
    (1usize..=3).prop_flat_map(|d| (polytope(d), polytope(d), polytope(d)))
}

fn vector(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, dim)
}

fn measure(dim: usize) -> impl Strategy<Value = DiscreteMeasure> {
    (points(dim, 1..=6), prop::collection::vec(0.01..1.0f64, 6)).prop_map(|(atoms, w)| {
        let w = &w[..atoms.len()];
        let total: f64 = w.iter().sum();
        DiscreteMeasure::new(atoms, w.iter().map(|x| x / total).collect()).unwrap()
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Interior point of `p` as a random convex combination of its vertices.
fn interior(p: &Polytope, raw: &[f64]) -> Point {
    let w: Vec<f64> = p
        .vertices()
        .iter()
        .zip(raw.iter().cycle())
        .map(|(_, r)| *r)
        .collect();
    let total: f64 = w.iter().sum();
    Point::weighted_sum(w.iter().map(|x| x / total).zip(p.vertices())).unwrap()
}

fn square() -> Polytope {
    Polytope::from_points(vec![
        [1.0, 1.0].into(),
        [-1.0, 1.0].into(),
        [-1.0, -1.0].into(),
        [1.0, -1.0].into(),
    ])
    .unwrap()
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn support_is_sublinear((p, f, g) in (1usize..=4).prop_flat_map(|d| (polytope(d), vector(d), vector(d)))) {
        let h: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        prop_assume!(norm(&f) > 1e-6 && norm(&g) > 1e-6 && norm(&h) > 1e-6);
        let s = |v: &[f64]| p.support(&Direction::new(v.to_vec()).unwrap()).unwrap() * norm(v);
        prop_assert!(s(&h) <= s(&f) + s(&g) + 1e-9);
    }

    #[test]
    fn extreme_points_idempotent(pts in (1usize..=4).prop_flat_map(|d| points(d, 1..=12))) {
        let once = extreme_points(&pts).unwrap();
        let twice = extreme_points(once.vertices()).unwrap();
        prop_assert_eq!(once.vertices(), twice.vertices());
    }

    #[test]
    fn slice_contains_argmax((p, f, gamma) in (1usize..=4).prop_flat_map(|d| (polytope(d), vector(d), 1e-6..2.0f64))) {
        prop_assume!(norm(&f) > 1e-6);
        let f = Direction::new(f).unwrap();
        let slice = p.slice(&f, gamma).unwrap();
        prop_assert!(!slice.is_empty());
        let top = &p.vertices()[p.argmax(&f).unwrap()];
        prop_assert!(slice.contains(top));
    }

    #[test]
    fn hausdorff_symmetry_and_identity((a, b) in pair()) {
        prop_assert_eq!(hausdorff(&a, &b).unwrap(), hausdorff(&b, &a).unwrap());
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        let same = sorted_vertices(&a) == sorted_vertices(&b);
        prop_assert_eq!(hausdorff(&a, &b).unwrap() <= 1e-9, same);
    }

    #[test]
    fn hausdorff_zero_for_redundant_description(p in sized_polytope(), raw in prop::collection::vec(0.05..1.0f64, 3)) {
        let mut pts = p.vertices().to_vec();
        pts.push(interior(&p, &raw));
        pts.reverse();
        let q = Polytope::new(pts).unwrap();
        prop_assert!(hausdorff(&p, &q).unwrap() <= 1e-9);
    }

    #[test]
    fn hausdorff_triangle((a, b, c) in triple()) {
        let ab = hausdorff(&a, &b).unwrap();
        let bc = hausdorff(&b, &c).unwrap();
        let ac = hausdorff(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9);
    }

    #[test]
    fn sampled_gap_is_monotone_and_bounded((a, b) in pair()) {
        let h = hausdorff(&a, &b).unwrap();
        let mut prev = 0.0;
        for n in [1, 4, 16, 64, 256, 1024] {
            let s = support_gap_sampled(&a, &b, n).unwrap();
            prop_assert!(s >= prev);
            prop_assert!(s <= h + 1e-12, "{} > {}", s, h);
            prev = s;
        }
    }

    #[test]
    fn distance_is_one_lipschitz((p, x, y) in (1usize..=4).prop_flat_map(|d| (polytope(d), vector(d), vector(d)))) {
        let (x, y) = (Point::new(x).unwrap(), Point::new(y).unwrap());
        let dx = p.distance(&x).unwrap();
        let dy = p.distance(&y).unwrap();
        prop_assert!((dx - dy).abs() <= x.distance(&y) + 1e-9);
    }

    #[test]
    fn linear_integral_matches_barycenter((mu, g) in (1usize..=5).prop_flat_map(|d| (measure(d), vector(d)))) {
        let lhs = mu.integrate_linear(&g).unwrap();
        let rhs = mu.barycenter().dot(&g);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()) * 10.0);
    }

    #[test]
    fn gamma_check_matches_sampled_functionals((mu, x, gamma) in (measure(2), vector(2), 0.01..5.0f64)) {
        let x = Point::new(x).unwrap();
        let gap = barycenter_gap(&mu, &x).unwrap();
        prop_assume!((gap - gamma).abs() > 1e-6 * gap.max(1.0));
        let sampled = sampled_representation_gap(&mu, &x, 10_000).unwrap();
        prop_assert_eq!(gamma_represents(&mu, &x, gamma).unwrap(), sampled < gamma);
    }

    #[test]
    fn weak_star_is_pseudometric((a, b, c, seed) in (1usize..=3).prop_flat_map(|d| (measure(d), measure(d), measure(d), any::<u64>()))) {
        let fam = TestFunctionFamily::new(seed, a.dim(), 40).unwrap();
        let d = |x: &DiscreteMeasure, y: &DiscreteMeasure| weak_star_distance(x, y, &fam, 40).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }

    #[test]
    fn weak_star_is_convex((a, b, nu, s) in (1usize..=3).prop_flat_map(|d| (measure(d), measure(d), measure(d), 0.0..1.0f64))) {
        let fam = TestFunctionFamily::new(7, a.dim(), 40).unwrap();
        let mix = DiscreteMeasure::mixture([(s, &a), (1.0 - s, &b)]).unwrap();
        let d = |x: &DiscreteMeasure| weak_star_distance(x, &nu, &fam, 40).unwrap();
        prop_assert!(d(&mix) <= s * d(&a) + (1.0 - s) * d(&b) + 1e-12);
    }

    #[test]
    fn mixture_barycenter_is_affine((a, b, s) in (1usize..=4).prop_flat_map(|d| (measure(d), measure(d), 0.0..1.0f64))) {
        let mix = DiscreteMeasure::mixture([(s, &a), (1.0 - s, &b)]).unwrap();
        let expect = a.barycenter().lerp(&b.barycenter(), 1.0 - s);
        prop_assert!(mix.barycenter().distance(&expect) <= 1e-12 * 10.0);
    }
}

proptest! {
    #![proptest_config(cases(128))]

    #[test]
    fn caratheodory_reconstructs(
        (p, raw) in (1usize..=6).prop_flat_map(|d| (points(d, 1..=20), prop::collection::vec(0.05..1.0f64, 20)))
    ) {
        let p = Polytope::from_points(p).unwrap();
        let x = interior(&p, &raw);
        let mu = caratheodory_measure(&p, &x).unwrap();
        prop_assert!(mu.barycenter().distance(&x) <= 1e-9);
        prop_assert!(mu.len() <= p.dim() + 1);
        for a in mu.atoms() {
            prop_assert!(p.vertex_index(a).is_some());
        }
    }

    #[test]
    fn witnesses_lie_in_l(
        (p, raw, mu, gamma) in (1usize..=3).prop_flat_map(|d| (polytope(d), prop::collection::vec(0.05..1.0f64, 10), measure(d), 0.01..1.0f64))
    ) {
        let x = interior(&p, &raw);
        let c = RepresentingMeasureConstraint::new(p.clone(), x, gamma, 1e-9).unwrap();
        prop_assert!(in_l(&choquet_witness(&c).unwrap(), &c));
        let rep = repair_witness(&mu, &c).unwrap();
        prop_assert!(in_l(&rep.measure, &c));
        let again = repair_witness(&rep.measure, &c).unwrap();
        prop_assert_eq!(again.blend_weight, 0.0);
        prop_assert_eq!(again.measure, rep.measure);
    }

    #[test]
    fn transport_keeps_weights((p, mu) in (1usize..=4).prop_flat_map(|d| (polytope(d), measure(d)))) {
        let (moved, _) = transport_to_extremes(&mu, &p).unwrap();
        prop_assert_eq!(moved.weights(), mu.weights());
        prop_assert!(moved.len() <= mu.len());
        for a in moved.atoms() {
            prop_assert!(p.vertex_index(a).is_some());
        }
    }
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn eval_is_deterministic(rate in -3.0..3.0f64, t in 0.0..1.0f64) {
        let f = ParametricBody::rotation(square(), rate, Point::origin(2), (0.0, 1.0)).unwrap();
        prop_assert_eq!(f.eval(t).unwrap(), f.eval(t).unwrap());
    }

    #[test]
    fn isometric_families_match_closed_form(v in vector(2), rate in -3.0..3.0f64, s in 0.0..1.0f64, t in 0.0..1.0f64) {
        let tr = ParametricBody::translation(square(), &v, (0.0, 1.0)).unwrap();
        let h = hausdorff(&tr.eval(s).unwrap(), &tr.eval(t).unwrap()).unwrap();
        prop_assert!((h - norm(&v) * (s - t).abs()).abs() <= 1e-9);

        let rot = ParametricBody::rotation(square(), rate, Point::origin(2), (0.0, 1.0)).unwrap();
        let h = hausdorff(&rot.eval(s).unwrap(), &rot.eval(t).unwrap()).unwrap();
        // Rotating by θ moves each corner by 2·√2·sin(θ/2); the Hausdorff
        // distance of the square and its rotation is at most that.
        let theta = (rate * (s - t)).abs();
        prop_assert!(h <= 2.0 * 2f64.sqrt() * (0.5 * theta).sin() + 1e-9);
        prop_assert!(h <= rot.lipschitz().unwrap() * (s - t).abs() + 1e-9);
    }

    #[test]
    fn tracking_returns_argmax_vertices(rate in -3.0..3.0f64, v in vector(2), k in 0usize..4) {
        let ts: Vec<f64> = (1..=40).map(|n| 1.0 / n as f64).collect();
        let e0 = square().vertices()[k].clone();
        let fams = [
            ParametricBody::rotation(square(), rate, Point::origin(2), (0.0, 1.0)).unwrap(),
            ParametricBody::translation(square(), &v, (0.0, 1.0)).unwrap(),
        ];
        for f in &fams {
            let tr = track_extreme_point(f, 0.0, &e0, &ts).unwrap();
            for s in &tr.steps {
                let p = f.eval(s.t).unwrap();
                prop_assert!(p.vertex_index(&s.point).is_some());
                let lhs = tr.exposure.direction.apply(&s.point).unwrap();
                prop_assert!((lhs - p.support(&tr.exposure.direction).unwrap()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn lsc_audit_passes_for_rigid_motion(rate in -3.0..3.0f64, v in vector(2)) {
        let grid = uniform_grid(0.0, 1.0, 51);
        for f in [
            ParametricBody::rotation(square(), rate, Point::origin(2), (0.0, 1.0)).unwrap(),
            ParametricBody::translation(square(), &v, (0.0, 1.0)).unwrap(),
        ] {
            let rep = lsc_ext_audit(&f, &grid, f.lipschitz().unwrap() + 0.1).unwrap();
            prop_assert!(rep.passed());
        }
    }

    #[test]
    fn partition_of_unity_sums_to_one(m in 2usize..12, raw in prop::collection::vec(0.55..2.0f64, 12)) {
        let s = 1.0 / (m - 1) as f64;
        let charts: Vec<Chart> = (0..m)
            .map(|i| Chart {
                center: i as f64 * s,
                radius: raw[i] * s,
                witness: DiscreteMeasure::dirac([i as f64, 1.0].into()),
            })
            .collect();
        let cover = CoverWithWitnesses::from_charts((0.0, 1.0), charts).unwrap();
        let pou = PartitionOfUnity::new(&cover);
        for k in 0..=10_000 {
            let t = k as f64 / 10_000.0;
            let w = pou.weights(t).unwrap();
            prop_assert!((w.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() <= 1e-12);
            for (alpha, chart) in cover.charts().iter().enumerate() {
                let e = pou.weight(alpha, t).unwrap();
                prop_assert!(e >= 0.0);
                if !chart.contains(t) {
                    prop_assert_eq!(e, 0.0);
                }
            }
            if k % 97 == 0 {
                let mu = l_delta(&cover, &pou, t).unwrap();
                prop_assert!(mu.weights().iter().all(|&x| x >= 0.0));
                prop_assert!((mu.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn selections_stay_in_the_body(v in vector(2), x in vector(2), eps in 0.01..0.2f64) {
        let grid = uniform_grid(0.0, 1.0, 6);
        let fams = [
            ParametricBody::translation(square(), &v, (0.0, 1.0)).unwrap(),
            ParametricBody::rotation(square(), FRAC_PI_2, Point::new(v.clone()).unwrap(), (0.0, 1.0)).unwrap(),
        ];
        for f in &fams {
            let sel = michael_epsilon_selection(f, eps, &grid).unwrap();
            prop_assert!(sel.passed(), "{}", sel.max_audit_distance());
            let p = continuous_selection(f, Point::new(x.clone()).unwrap()).unwrap();
            let audit = p.audit(&uniform_grid(0.0, 1.0, 41)).unwrap();
            prop_assert!(audit.passed());
            prop_assert!(f.eval(0.3).unwrap().distance(&p.at(0.3).unwrap()).unwrap() <= 1e-10);
        }
    }
}
