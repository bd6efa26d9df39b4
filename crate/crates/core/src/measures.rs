//! Finitely supported probability measures on `R^d`.
//!
//! Functionals are identified with vectors through the Euclidean inner
//! product, so the γ-representation test
//! `sup_{|f| ≤ 1} |f(x) - ∫ f dμ| < γ` reduces to `|x - bary(μ)| < γ`.
//! A sampled-direction version of the same supremum is kept as an independent
//! cross-check.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use crate::error::{check_dim, invalid, Error, Result};
use crate::geometry::{dot, norm, DirectionSequence, Point, Polytope};

/// Weights must sum to one within this tolerance.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Atoms lighter than this are ignored by support checks.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-15;
/// Default truncation index of the weak* series.
pub const DEFAULT_TERMS: usize = 40;
/// Membership tolerance for a constraint's target point.
pub const TARGET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<Point>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("a measure needs at least one atom"));
        }
        if atoms.len() != weights.len() {
            return Err(invalid(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        let d = atoms[0].dim();
        for a in &atoms {
            check_dim(d, a.dim())?;
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(invalid(format!("negative or non-finite weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { atoms, weights })
    }

    /// Unit mass at `x`.
    pub fn dirac(x: Point) -> Self {
        Self {
            atoms: vec![x],
            weights: vec![1.0],
        }
    }

    pub(crate) fn from_parts_unchecked(atoms: Vec<Point>, weights: Vec<f64>) -> Self {
        Self { atoms, weights }
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Point)> {
        self.weights.iter().copied().zip(&self.atoms)
    }

    /// `Σ λ_i g(a_i)`.
    pub fn integrate(&self, g: impl Fn(&Point) -> f64) -> f64 {
        self.iter().map(|(w, a)| w * g(a)).sum()
    }

    /// Integral of the linear functional `x ↦ <f, x>`.
    pub fn integrate_linear(&self, f: &[f64]) -> Result<f64> {
        check_dim(self.dim(), f.len())?;
        Ok(self.integrate(|a| a.dot(f)))
    }

    /// `Σ λ_i a_i`.
    pub fn barycenter(&self) -> Point {
        Point::weighted_sum(self.iter()).expect("nonempty measure")
    }

    /// Convex combination `Σ c_k μ_k`; coefficients are normalised by their
    /// sum, components with zero coefficient are skipped and bitwise-equal
    /// atoms are merged in first-occurrence order.
    pub fn mixture<'a>(
        components: impl IntoIterator<Item = (f64, &'a DiscreteMeasure)>,
    ) -> Result<Self> {
        let components: Vec<(f64, &DiscreteMeasure)> = components.into_iter().collect();
        let total: f64 = components.iter().map(|(c, _)| *c).sum();
        if components.iter().any(|(c, _)| !(*c >= 0.0)) || !(total > 0.0) {
            return Err(invalid(
                "mixture coefficients must be ≥ 0 with positive sum",
            ));
        }
        let mut atoms: Vec<Point> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (c, mu) in &components {
            if *c == 0.0 {
                continue;
            }
            check_dim(components[0].1.dim(), mu.dim())?;
            for (w, a) in mu.iter() {
                let mass = c / total * w;
                match atoms.iter().position(|b| b == a) {
                    Some(i) => weights[i] += mass,
                    None => {
                        atoms.push(a.clone());
                        weights.push(mass);
                    }
                }
            }
        }
        Ok(Self { atoms, weights })
    }

    /// Structured text record with 17 significant digits per number.
    pub fn to_record(&self) -> String {
        let mut s = String::from("[measure]\n");
        let _ = writeln!(s, "dimension = {}", self.dim());
        let ws: Vec<String> = self.weights.iter().map(|w| format_float(*w)).collect();
        let _ = writeln!(s, "weights = [{}]", ws.join(", "));
        s.push_str("atoms = [\n");
        for a in &self.atoms {
            let cs: Vec<String> = a.coords().iter().map(|c| format_float(*c)).collect();
            let _ = writeln!(s, "  [{}],", cs.join(", "));
        }
        s.push_str("]\n");
        s
    }

    pub fn from_record(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Record {
            measure: Body,
        }
        #[derive(Deserialize)]
        struct Body {
            dimension: usize,
            weights: Vec<f64>,
            atoms: Vec<Vec<f64>>,
        }
        let rec: Record =
            toml::from_str(text).map_err(|e| invalid(format!("measure record: {e}")))?;
        let atoms = rec
            .measure
            .atoms
            .into_iter()
            .map(|c| {
                check_dim(rec.measure.dimension, c.len())?;
                Point::new(c)
            })
            .collect::<Result<Vec<_>>>()?;
        DiscreteMeasure::new(atoms, rec.measure.weights)
    }
}

/// Float formatting used in all reports: scientific, 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `|x - bary(μ)|`, the supremum of `|f(x) - ∫ f dμ|` over the unit ball.
pub fn barycenter_gap(mu: &DiscreteMeasure, x: &Point) -> Result<f64> {
    check_dim(mu.dim(), x.dim())?;
    Ok(mu.barycenter().distance(x))
}

/// Whether `mu` γ-represents `x`: `|x - bary(μ)| < γ` (strict).
pub fn gamma_represents(mu: &DiscreteMeasure, x: &Point, gamma: f64) -> Result<bool> {
    if !(gamma > 0.0) {
        return Err(invalid(format!("gamma must be positive, got {gamma}")));
    }
    Ok(barycenter_gap(mu, x)? < gamma)
}

/// `max |<f, x> - ∫ <f, ·> dμ|` over the first `n_dirs` sampled unit
/// directions; a lower bound for [`barycenter_gap`].
pub fn sampled_representation_gap(mu: &DiscreteMeasure, x: &Point, n_dirs: usize) -> Result<f64> {
    check_dim(mu.dim(), x.dim())?;
    if n_dirs == 0 {
        return Err(invalid("need at least one direction"));
    }
    let seq = DirectionSequence::new(x.dim(), 0);
    let mut best = 0.0_f64;
    for k in 0..n_dirs {
        let f = seq.nth(k);
        let v = (x.dot(f.coords()) - mu.integrate_linear(f.coords())?).abs();
        best = best.max(v);
    }
    Ok(best)
}

/// True iff every atom of non-negligible weight lies within `tol` of a
/// vertex of `body`.
pub fn supported_on_extremes(mu: &DiscreteMeasure, body: &Polytope, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(invalid(format!("support tolerance must be ≥ 0, got {tol}")));
    }
    check_dim(body.dim(), mu.dim())?;
    Ok(mu
        .iter()
        .filter(|(w, _)| *w > NEGLIGIBLE_WEIGHT)
        .all(|(_, a)| body.nearest_vertex(a).1 <= tol))
}

/// Fixed sequence of bounded test functions `ζ_j(x) = cos(<w_j, x> + b_j)`
/// with Gaussian frequencies and uniform phases drawn from a ChaCha stream.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionFamily {
    seed: u64,
    dim: usize,
    freqs: Vec<Vec<f64>>,
    phases: Vec<f64>,
}

impl TestFunctionFamily {
    pub fn new(seed: u64, dim: usize, count: usize) -> Result<Self> {
        if dim == 0 || count == 0 {
            return Err(invalid("test-function family needs dim ≥ 1 and count ≥ 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut freqs = Vec::with_capacity(count);
        let mut phases = Vec::with_capacity(count);
        for _ in 0..count {
            freqs.push((0..dim).map(|_| rng.sample(StandardNormal)).collect());
            phases.push(rng.random_range(0.0..std::f64::consts::TAU));
        }
        Ok(Self {
            seed,
            dim,
            freqs,
            phases,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// `ζ_j(x)` for the zero-based index `j`.
    pub fn eval(&self, j: usize, x: &Point) -> f64 {
        (dot(&self.freqs[j], x.coords()) + self.phases[j]).cos()
    }

    /// Lipschitz constant `|w_j|` of `ζ_j`.
    pub fn lipschitz(&self, j: usize) -> f64 {
        norm(&self.freqs[j])
    }
}

/// Bound on the discarded tail `Σ_{j > N} 2^{-j} |(μ - ν)(ζ_j)| ≤ 2^{1-N}`.
pub fn truncation_bound(n_terms: usize) -> f64 {
    2f64.powi(1 - n_terms as i32)
}

/// `Σ_{j=1}^{N} 2^{-j} |∫ ζ_j dμ_1 - ∫ ζ_j dμ_2|`.
pub fn weak_star_distance(
    mu1: &DiscreteMeasure,
    mu2: &DiscreteMeasure,
    fam: &TestFunctionFamily,
    n_terms: usize,
) -> Result<f64> {
    if n_terms < 1 {
        return Err(invalid("weak* distance needs N ≥ 1"));
    }
    if n_terms > fam.len() {
        return Err(invalid(format!(
            "N = {n_terms} exceeds the {} available test functions",
            fam.len()
        )));
    }
    check_dim(mu1.dim(), mu2.dim())?;
    check_dim(fam.dim(), mu1.dim())?;
    let mut total = 0.0;
    let mut scale = 1.0;
    for j in 0..n_terms {
        scale *= 0.5;
        let a = mu1.integrate(|x| fam.eval(j, x));
        let b = mu2.integrate(|x| fam.eval(j, x));
        total += scale * (a - b).abs();
    }
    Ok(total)
}

/// Membership data for the set `L`: measures supported on `ext(body)` that
/// γ-represent `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentingMeasureConstraint {
    body: Polytope,
    target: Point,
    gamma: f64,
    ext_tolerance: f64,
}

impl RepresentingMeasureConstraint {
    pub fn new(body: Polytope, target: Point, gamma: f64, ext_tolerance: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(invalid(format!("gamma must be positive, got {gamma}")));
        }
        if !(ext_tolerance >= 0.0) {
            return Err(invalid(format!(
                "extreme-point tolerance must be ≥ 0, got {ext_tolerance}"
            )));
        }
        let body = body.reduce();
        let proj = body.nearest_point(&target)?;
        if proj.distance > TARGET_TOL {
            let direction = target.sub(&proj.point);
            let n = norm(&direction);
            return Err(Error::OutsideBody {
                distance: proj.distance,
                direction: direction.into_iter().map(|c| c / n).collect(),
            });
        }
        Ok(Self {
            body,
            target,
            gamma,
            ext_tolerance,
        })
    }

    pub fn body(&self) -> &Polytope {
        &self.body
    }

    pub fn target(&self) -> &Point {
        &self.target
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn ext_tolerance(&self) -> f64 {
        self.ext_tolerance
    }
}

/// Both clauses of `L`: support on extreme points and γ-representation.
pub fn in_l(mu: &DiscreteMeasure, c: &RepresentingMeasureConstraint) -> bool {
    if mu.dim() != c.body.dim() {
        return false;
    }
    supported_on_extremes(mu, &c.body, c.ext_tolerance).unwrap_or(false)
        && barycenter_gap(mu, &c.target).is_ok_and(|g| g < c.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm() -> DiscreteMeasure {
        DiscreteMeasure::new(vec![[1.0, 1.0].into(), [-1.0, -1.0].into()], vec![0.5, 0.5]).unwrap()
    }

    fn tri_measure() -> DiscreteMeasure {
        DiscreteMeasure::new(
            vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [0.0, 1.0].into()],
            vec![0.25, 0.25, 0.5],
        )
        .unwrap()
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

    #[test]
    fn validation() {
        assert!(DiscreteMeasure::new(vec![], vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![[0.0].into()], vec![0.9]).is_err());
        assert!(DiscreteMeasure::new(vec![[0.0].into(), [1.0].into()], vec![1.5, -0.5]).is_err());
        assert!(
            DiscreteMeasure::new(vec![[0.0].into(), [1.0, 2.0].into()], vec![0.5, 0.5]).is_err()
        );
    }

    #[test]
    fn integrate_examples() {
        let x = Point::from([0.3, 0.7]);
        let g = |p: &Point| p.coords()[0].sin() + p.coords()[1];
        assert_eq!(DiscreteMeasure::dirac(x.clone()).integrate(g), g(&x));
        assert_eq!(pm().integrate_linear(&[1.0, 0.0]).unwrap(), 0.0);
        // 0.25·0 + 0.25·1 + 0.5·1
        assert_eq!(tri_measure().integrate_linear(&[1.0, 1.0]).unwrap(), 0.75);
        assert!(pm().integrate_linear(&[1.0]).is_err());
    }

    #[test]
    fn barycenter_examples() {
        let x = Point::from([0.3, 0.7]);
        assert_eq!(DiscreteMeasure::dirac(x.clone()).barycenter(), x);
        assert_eq!(pm().barycenter(), Point::from([0.0, 0.0]));
        assert_eq!(tri_measure().barycenter(), Point::from([0.25, 0.5]));
    }

    #[test]
    fn gamma_representation_examples() {
        let x = Point::from([0.2, -0.4]);
        assert!(gamma_represents(&DiscreteMeasure::dirac(x.clone()), &x, 1e-6).unwrap());
        let y = Point::from([0.1, 0.0]);
        assert!(!gamma_represents(&pm(), &y, 0.05).unwrap());
        assert!(gamma_represents(&pm(), &y, 0.2).unwrap());
        assert!(gamma_represents(&pm(), &y, 0.0).is_err());
        assert!(gamma_represents(&pm(), &y, -1.0).is_err());
    }

    #[test]
    fn gamma_tie_is_rejected() {
        let mu = DiscreteMeasure::dirac([0.0, 0.0].into());
        assert!(!gamma_represents(&mu, &[0.5, 0.0].into(), 0.5).unwrap());
    }

    #[test]
    fn sampled_gap_lower_bounds_norm_gap() {
        let y = Point::from([0.1, 0.0]);
        let s = sampled_representation_gap(&pm(), &y, 10_000).unwrap();
        let n = barycenter_gap(&pm(), &y).unwrap();
        assert!(s <= n + 1e-15 && s > n * (1.0 - 1e-6));
    }

    #[test]
    fn weak_star_examples() {
        let fam = TestFunctionFamily::new(7, 2, 40).unwrap();
        assert_eq!(weak_star_distance(&pm(), &pm(), &fam, 40).unwrap(), 0.0);
        let a = DiscreteMeasure::dirac([0.0, 0.0].into());
        let b = DiscreteMeasure::dirac([1.0, 0.0].into());
        let d = weak_star_distance(&a, &b, &fam, 20).unwrap();
        // Independent re-evaluation of the defining finite sum.
        let mut direct = 0.0;
        for j in 1..=20 {
            let w = &fam.freqs[j - 1];
            let z0 = fam.phases[j - 1].cos();
            let z1 = (w[0] + fam.phases[j - 1]).cos();
            direct += (z0 - z1).abs() / 2f64.powi(j as i32);
        }
        assert!((d - direct).abs() < 1e-15);
        assert_eq!(d, weak_star_distance(&b, &a, &fam, 20).unwrap());
        assert!(weak_star_distance(&a, &b, &fam, 0).is_err());
        assert!(weak_star_distance(&a, &b, &fam, 41).is_err());
    }

    #[test]
    fn family_is_reproducible_and_bounded() {
        let f1 = TestFunctionFamily::new(3, 3, 10).unwrap();
        let f2 = TestFunctionFamily::new(3, 3, 10).unwrap();
        assert_eq!(f1, f2);
        assert_ne!(f1, TestFunctionFamily::new(4, 3, 10).unwrap());
        let x = Point::from([100.0, -3.0, 2.5]);
        for j in 0..10 {
            assert!(f1.eval(j, &x).abs() <= 1.0);
        }
    }

    #[test]
    fn support_examples() {
        let p = square();
        assert!(supported_on_extremes(&pm(), &p, 0.0).unwrap());
        let mid = DiscreteMeasure::dirac([1.0, 0.0].into());
        assert!(!supported_on_extremes(&mid, &p, 0.1).unwrap());
        let near = DiscreteMeasure::dirac([1.0 + 1e-6, 1.0].into());
        assert!(supported_on_extremes(&near, &p, 1e-3).unwrap());
        assert!(supported_on_extremes(&near, &p, -1.0).is_err());
    }

    #[test]
    fn in_l_examples() {
        let tri = Polytope::from_points(vec![
            [0.0, 0.0].into(),
            [1.0, 0.0].into(),
            [0.0, 1.0].into(),
        ])
        .unwrap();
        let centroid = Point::from([1.0 / 3.0, 1.0 / 3.0]);
        let c =
            RepresentingMeasureConstraint::new(tri.clone(), centroid.clone(), 0.01, 0.0).unwrap();
        let third = 1.0 / 3.0;
        let exact = DiscreteMeasure::new(
            tri.vertices().to_vec(),
            vec![third, third, 1.0 - 2.0 * third],
        )
        .unwrap();
        assert!(in_l(&exact, &c));
        let wrong = DiscreteMeasure::dirac([1.0, 0.0].into());
        assert!(!in_l(&wrong, &c));
        let interior = DiscreteMeasure::dirac(centroid);
        assert!(!in_l(&interior, &c));
    }

    #[test]
    fn constraint_rejects_outside_target() {
        let err =
            RepresentingMeasureConstraint::new(square(), [3.0, 0.0].into(), 0.1, 0.0).unwrap_err();
        match err {
            Error::OutsideBody {
                distance,
                direction,
            } => {
                assert!((distance - 2.0).abs() < 1e-12);
                assert!((direction[0] - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mixture_merges_atoms() {
        let a = DiscreteMeasure::dirac([1.0, 1.0].into());
        let m = DiscreteMeasure::mixture([(0.5, &pm()), (0.5, &a)]).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.weights(), &[0.75, 0.25]);
        let skip = DiscreteMeasure::mixture([(0.0, &pm()), (2.0, &a)]).unwrap();
        assert_eq!(skip, a);
    }

    #[test]
    fn record_round_trip() {
        let mu = DiscreteMeasure::new(
            vec![[0.1, -1.0 / 3.0].into(), [2.0e-300, 7.5].into()],
            vec![0.3, 0.7],
        )
        .unwrap();
        let text = mu.to_record();
        assert!(text.contains("dimension = 2"));
        assert_eq!(DiscreteMeasure::from_record(&text).unwrap(), mu);
    }
}
