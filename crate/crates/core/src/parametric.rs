//! Parametric polytopes `t ↦ P(t)` over a closed interval, numerical
//! continuity audits, and extreme-point tracking through exposing directions.

use rayon::prelude::*;

use crate::error::{check_dim, invalid, Error, Result};
use crate::geometry::{hausdorff, Direction, Point, Polytope};

/// Polynomial in `t` with ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn constant(c: f64) -> Self {
        Self(vec![c])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// Degree ignoring trailing zero coefficients (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `P(t) = A(t)·K0 + b(t)` with polynomial entries.
    Affine {
        base: Polytope,
        matrix: Vec<Vec<Polynomial>>,
        offset: Vec<Polynomial>,
    },
    /// Planar rotation of `base` by angle `rate·t` about `center`.
    Rotation {
        base: Polytope,
        rate: f64,
        center: Point,
    },
    /// Vertex `i` follows the piecewise-linear path through `paths[i][k]` at
    /// `breakpoints[k]`. Nothing guarantees the vertices stay extreme.
    VertexInterpolation {
        breakpoints: Vec<f64>,
        paths: Vec<Vec<Point>>,
    },
}

impl Family {
    pub fn kind(&self) -> &'static str {
        match self {
            Family::Affine { .. } => "affine",
            Family::Rotation { .. } => "rotation",
            Family::VertexInterpolation { .. } => "vertex_interpolation",
        }
    }
}

/// A continuous polytope-valued map on `[t_lo, t_hi]`, optionally with a
/// declared Lipschitz bound `h(P(s), P(t)) ≤ lip·|s - t|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricBody {
    family: Family,
    domain: (f64, f64),
    lipschitz: Option<f64>,
    dim: usize,
}

impl ParametricBody {
    /// Affine family. When `A` is constant and `b` at most linear the exact
    /// Lipschitz constant `|b'|` is declared automatically.
    pub fn affine(
        base: Polytope,
        matrix: Vec<Vec<Polynomial>>,
        offset: Vec<Polynomial>,
        domain: (f64, f64),
    ) -> Result<Self> {
        let d = base.dim();
        if matrix.len() != d || matrix.iter().any(|r| r.len() != d) {
            return Err(invalid(format!("affine matrix must be {d}×{d}")));
        }
        check_dim(d, offset.len())?;
        check_domain(domain)?;
        let rigid = matrix.iter().flatten().all(|p| p.degree() == 0)
            && offset.iter().all(|p| p.degree() <= 1);
        let lipschitz = rigid.then(|| {
            offset
                .iter()
                .map(|p| p.coeff(1).powi(2))
                .sum::<f64>()
                .sqrt()
        });
        Ok(Self {
            family: Family::Affine {
                base: base.reduce(),
                matrix,
                offset,
            },
            domain,
            lipschitz,
            dim: d,
        })
    }

    /// `P(t) = K0` for all `t`.
    pub fn constant(base: Polytope, domain: (f64, f64)) -> Result<Self> {
        let d = base.dim();
        Self::affine(
            base,
            identity(d),
            vec![Polynomial::constant(0.0); d],
            domain,
        )
    }

    /// `P(t) = K0 + t·v`.
    pub fn translation(base: Polytope, velocity: &[f64], domain: (f64, f64)) -> Result<Self> {
        let d = base.dim();
        check_dim(d, velocity.len())?;
        let offset = velocity.iter().map(|&v| Polynomial(vec![0.0, v])).collect();
        Self::affine(base, identity(d), offset, domain)
    }

    /// Rotation by `rate·t` radians about `center`; declares the Lipschitz
    /// bound `|rate|·max_v |v - center|` from the vertex arc lengths.
    pub fn rotation(base: Polytope, rate: f64, center: Point, domain: (f64, f64)) -> Result<Self> {
        if base.dim() != 2 {
            return Err(invalid("rotation families are planar"));
        }
        check_dim(2, center.dim())?;
        if !rate.is_finite() {
            return Err(invalid("rotation rate must be finite"));
        }
        check_domain(domain)?;
        let base = base.reduce();
        let radius = base
            .vertices()
            .iter()
            .map(|v| v.distance(&center))
            .fold(0.0, f64::max);
        Ok(Self {
            family: Family::Rotation { base, rate, center },
            domain,
            lipschitz: Some(rate.abs() * radius),
            dim: 2,
        })
    }

    /// Piecewise-linear vertex paths; the domain is `[breakpoints[0],
    /// breakpoints[last]]` and the declared Lipschitz bound is the fastest
    /// vertex speed on any segment.
    pub fn vertex_interpolation(breakpoints: Vec<f64>, paths: Vec<Vec<Point>>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(invalid(
                "vertex interpolation needs at least two breakpoints",
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("breakpoints must be strictly increasing"));
        }
        let first = paths.first().ok_or_else(|| invalid("no vertex paths"))?;
        let d = first
            .first()
            .ok_or_else(|| invalid("empty vertex path"))?
            .dim();
        let mut speed = 0.0_f64;
        for path in &paths {
            if path.len() != breakpoints.len() {
                return Err(invalid(format!(
                    "each path needs {} positions, found {}",
                    breakpoints.len(),
                    path.len()
                )));
            }
            for (k, p) in path.iter().enumerate() {
                check_dim(d, p.dim())?;
                if k > 0 {
                    let dt = breakpoints[k] - breakpoints[k - 1];
                    speed = speed.max(p.distance(&path[k - 1]) / dt);
                }
            }
        }
        let domain = (breakpoints[0], *breakpoints.last().unwrap());
        Ok(Self {
            family: Family::VertexInterpolation { breakpoints, paths },
            domain,
            lipschitz: Some(speed),
            dim: d,
        })
    }

    /// Declares (or overrides) the Lipschitz bound.
    pub fn with_lipschitz(mut self, lip: f64) -> Self {
        self.lipschitz = Some(lip);
        self
    }

    pub fn without_lipschitz(mut self) -> Self {
        self.lipschitz = None;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn check_in_domain(&self, t: f64) -> Result<()> {
        if t >= self.domain.0 && t <= self.domain.1 {
            Ok(())
        } else {
            Err(invalid(format!(
                "t = {t} outside the parameter domain [{}, {}]",
                self.domain.0, self.domain.1
            )))
        }
    }

    /// `P(t)` as a reduced polytope.
    pub fn eval(&self, t: f64) -> Result<Polytope> {
        self.check_in_domain(t)?;
        match &self.family {
            Family::Affine {
                base,
                matrix,
                offset,
            } => {
                let a: Vec<Vec<f64>> = matrix
                    .iter()
                    .map(|row| row.iter().map(|p| p.eval(t)).collect())
                    .collect();
                let b: Vec<f64> = offset.iter().map(|p| p.eval(t)).collect();
                let pts = base
                    .vertices()
                    .iter()
                    .map(|v| {
                        let c = a
                            .iter()
                            .zip(&b)
                            .map(|(row, bi)| {
                                row.iter().zip(v.coords()).map(|(x, y)| x * y).sum::<f64>() + bi
                            })
                            .collect();
                        Point::new(c)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Polytope::from_points(pts)
            }
            Family::Rotation { base, rate, center } => {
                let (s, c) = (rate * t).sin_cos();
                let (cx, cy) = (center.coords()[0], center.coords()[1]);
                let pts = base
                    .vertices()
                    .iter()
                    .map(|v| {
                        let (x, y) = (v.coords()[0] - cx, v.coords()[1] - cy);
                        Point::new(vec![cx + c * x - s * y, cy + s * x + c * y])
                    })
                    .collect::<Result<Vec<_>>>()?;
                // Rotations preserve extremality.
                Ok(Polytope::from_reduced_unchecked(pts))
            }
            Family::VertexInterpolation { breakpoints, paths } => {
                let k = match breakpoints.iter().position(|&b| b >= t) {
                    Some(0) | None => 1,
                    Some(k) => k,
                };
                let (t0, t1) = (breakpoints[k - 1], breakpoints[k]);
                let s = (t - t0) / (t1 - t0);
                let pts = paths
                    .iter()
                    .map(|p| {
                        if s == 0.0 {
                            p[k - 1].clone()
                        } else if s == 1.0 {
                            p[k].clone()
                        } else {
                            p[k - 1].lerp(&p[k], s)
                        }
                    })
                    .collect();
                Polytope::from_points(pts)
            }
        }
    }

    /// Evaluates the family on every grid point (in parallel, order kept).
    pub fn eval_many(&self, ts: &[f64]) -> Result<Vec<Polytope>> {
        ts.par_iter().map(|&t| self.eval(t)).collect()
    }
}

fn identity(d: usize) -> Vec<Vec<Polynomial>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| Polynomial::constant(if i == j { 1.0 } else { 0.0 }))
                .collect()
        })
        .collect()
}

fn check_domain(domain: (f64, f64)) -> Result<()> {
    if domain.0.is_finite() && domain.1.is_finite() && domain.0 <= domain.1 {
        Ok(())
    } else {
        Err(invalid(format!("bad parameter domain {domain:?}")))
    }
}

/// `n ≥ 2` equally spaced points from `lo` to `hi`, endpoints exact.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + i as f64 * h })
        .collect()
}

fn check_grid(body: &ParametricBody, grid: &[f64]) -> Result<()> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("grid must be strictly increasing"));
    }
    for &t in grid {
        body.check_in_domain(t)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityPair {
    pub t0: f64,
    pub t1: f64,
    pub hausdorff: f64,
    /// `hausdorff / |t1 - t0|`.
    pub modulus: f64,
    /// `Some(h ≤ (lip + tol)·Δt)` when a Lipschitz bound is declared.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub lipschitz: Option<f64>,
    pub tol: f64,
    pub pairs: Vec<ContinuityPair>,
}

impl ContinuityReport {
    pub fn max_modulus(&self) -> f64 {
        self.pairs.iter().map(|p| p.modulus).fold(0.0, f64::max)
    }

    /// `false` only if a declared bound is violated somewhere.
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.pass != Some(false))
    }
}

/// Hausdorff distance and empirical modulus on each adjacent grid pair.
pub fn continuity_audit(body: &ParametricBody, grid: &[f64], tol: f64) -> Result<ContinuityReport> {
    check_grid(body, grid)?;
    let polys = body.eval_many(grid)?;
    let lip = body.lipschitz();
    let pairs = (0..grid.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let dt = grid[i + 1] - grid[i];
            let h = hausdorff(&polys[i], &polys[i + 1])?;
            Ok(ContinuityPair {
                t0: grid[i],
                t1: grid[i + 1],
                hausdorff: h,
                modulus: h / dt,
                pass: lip.map(|l| h <= (l + tol) * dt),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ContinuityReport {
        lipschitz: lip,
        tol,
        pairs,
    })
}

/// Unit functional strictly exposing a vertex, with its separation margin
/// `min_{v ≠ e} <f, e - v>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exposure {
    pub direction: Direction,
    pub margin: f64,
}

/// The max-margin exposing direction of the vertex `e`: `f ∝ e - π(e)`
/// where `π(e)` is the projection of `e` onto the hull of the other vertices.
/// Its margin equals the distance from `e` to that hull.
pub fn exposing_direction(body: &Polytope, e: &Point) -> Result<Exposure> {
    check_dim(body.dim(), e.dim())?;
    let idx = body
        .vertex_index(e)
        .ok_or_else(|| Error::Domain(format!("{e} is not a vertex of the body")))?;
    let others: Vec<Point> = body
        .vertices()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, v)| v.clone())
        .collect();
    if others.is_empty() {
        return Ok(Exposure {
            direction: Direction::axis(e.dim(), 0),
            margin: f64::INFINITY,
        });
    }
    let rest = Polytope::new(others)?;
    let proj = rest.nearest_point(e)?;
    if proj.distance <= 0.0 {
        return Err(Error::Domain(format!(
            "{e} is not an extreme point of the body"
        )));
    }
    let direction = Direction::new(e.sub(&proj.point))?;
    let margin = rest
        .vertices()
        .iter()
        .map(|v| {
            direction
                .coords()
                .iter()
                .zip(e.sub(v))
                .map(|(a, b)| a * b)
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    if !(margin > 0.0) {
        return Err(Error::Domain(format!("{e} is not strictly exposed")));
    }
    Ok(Exposure { direction, margin })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackStep {
    pub t: f64,
    /// The tracked extreme point `a_n` of `P(t_n)`.
    pub point: Point,
    /// `c(f0, P(t_n)) - <f0, a_n>`; `a_n` lies in every slice deeper than this.
    pub slice_depth: f64,
    pub distance_to_start: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub exposure: Exposure,
    pub steps: Vec<TrackStep>,
}

/// Follows the extreme point `e0` of `P(t0)` to each `t_n`: `a_n` is the
/// vertex of `P(t_n)` maximising the exposing functional of `e0` (ties go to
/// the lexicographically smallest vertex). The argmax lies in every nonempty
/// slice `R_γ(t_n)` of that functional.
pub fn track_extreme_point(
    body: &ParametricBody,
    t0: f64,
    e0: &Point,
    ts: &[f64],
) -> Result<Track> {
    let p0 = body.eval(t0)?;
    let exposure = exposing_direction(&p0, e0)?;
    let f0 = &exposure.direction;
    let steps = ts
        .par_iter()
        .map(|&t| {
            let p = body.eval(t)?;
            let i = p.argmax(f0)?;
            let point = p.vertices()[i].clone();
            let slice_depth = p.support(f0)? - f0.apply(&point)?;
            Ok(TrackStep {
                t,
                distance_to_start: point.distance(e0),
                point,
                slice_depth,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Track { exposure, steps })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LscPair {
    pub t0: f64,
    pub t1: f64,
    /// `max_{a ∈ ext P(t0)} min_{b ∈ ext P(t1)} |a - b|`.
    pub max_distance: f64,
    /// The vertex of `P(t0)` attaining `max_distance`.
    pub worst_vertex: Point,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LscReport {
    pub tol_slope: f64,
    pub pairs: Vec<LscPair>,
}

impl LscReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }

    pub fn max_distance(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.max_distance)
            .fold(0.0, f64::max)
    }

    /// Index of the first offending pair.
    pub fn first_failure(&self) -> Option<usize> {
        self.pairs.iter().position(|p| !p.pass)
    }
}

/// Quantitative lower-semicontinuity certificate for `t ↦ ext P(t)` on a
/// grid: every extreme point at `t_i` must have an extreme point of
/// `P(t_{i+1})` within `tol_slope·Δt`.
pub fn lsc_ext_audit(body: &ParametricBody, grid: &[f64], tol_slope: f64) -> Result<LscReport> {
    check_grid(body, grid)?;
    let polys = body.eval_many(grid)?;
    let pairs = (0..grid.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let dt = grid[i + 1] - grid[i];
            let (worst_vertex, max_distance) = polys[i]
                .vertices()
                .iter()
                .map(|a| (a, polys[i + 1].nearest_vertex(a).1))
                .fold(
                    (&polys[i].vertices()[0], f64::NEG_INFINITY),
                    |acc, (a, d)| {
                        if d > acc.1 {
                            (a, d)
                        } else {
                            acc
                        }
                    },
                );
            LscPair {
                t0: grid[i],
                t1: grid[i + 1],
                max_distance,
                worst_vertex: worst_vertex.clone(),
                pass: max_distance <= tol_slope * dt,
            }
        })
        .collect();
    Ok(LscReport { tol_slope, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn square() -> Polytope {
        Polytope::from_points(vec![
            [1.0, 1.0].into(),
            [-1.0, 1.0].into(),
            [-1.0, -1.0].into(),
            [1.0, -1.0].into(),
        ])
        .unwrap()
    }

    fn rotating() -> ParametricBody {
        ParametricBody::rotation(square(), FRAC_PI_2, Point::origin(2), (0.0, 1.0)).unwrap()
    }

    fn translating() -> ParametricBody {
        ParametricBody::translation(square(), &[1.0, 0.0], (0.0, 1.0)).unwrap()
    }

    /// Square plus a fifth point travelling from (2, 0) through (0, 0) and back.
    fn roaming() -> ParametricBody {
        let corners: [[f64; 2]; 4] = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];
        let mut paths: Vec<Vec<Point>> = corners.iter().map(|c| vec![(*c).into(); 3]).collect();
        paths.push(vec![
            [2.0, 0.0].into(),
            [0.0, 0.0].into(),
            [2.0, 0.0].into(),
        ]);
        ParametricBody::vertex_interpolation(vec![0.0, 0.5, 1.0], paths).unwrap()
    }

    #[test]
    fn polynomial_horner() {
        assert_eq!(Polynomial(vec![1.0, -2.0, 3.0]).eval(2.0), 9.0);
        assert_eq!(Polynomial(vec![]).eval(2.0), 0.0);
    }

    #[test]
    fn affine_lipschitz_detection() {
        assert_eq!(translating().lipschitz(), Some(1.0));
        assert_eq!(
            ParametricBody::constant(square(), (0.0, 1.0))
                .unwrap()
                .lipschitz(),
            Some(0.0)
        );
        let m = vec![
            vec![Polynomial(vec![1.0, 1.0]), Polynomial::constant(0.0)],
            vec![Polynomial::constant(0.0), Polynomial::constant(1.0)],
        ];
        let f = ParametricBody::affine(square(), m, vec![Polynomial::constant(0.0); 2], (0.0, 1.0))
            .unwrap();
        assert_eq!(f.lipschitz(), None);
        assert_eq!(Polynomial(vec![1.0, 0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(
            rotating().eval(0.0).unwrap().vertices(),
            square().vertices()
        );
        let p = translating().eval(0.5).unwrap();
        let mut v = p.vertices().to_vec();
        v.sort_by(|a, b| a.lex_cmp(b));
        assert_eq!(
            v,
            vec![
                Point::from([-0.5, -1.0]),
                Point::from([-0.5, 1.0]),
                Point::from([1.5, -1.0]),
                Point::from([1.5, 1.0])
            ]
        );
        let r = roaming();
        assert_eq!(r.eval(0.5).unwrap().vertices(), square().vertices());
        assert_eq!(r.eval(0.0).unwrap().vertices().len(), 5);
        assert!(r.eval(1.5).is_err());
        assert!(translating().eval(-0.1).is_err());
    }

    #[test]
    fn eval_is_deterministic() {
        let f = rotating();
        assert_eq!(f.eval(0.37).unwrap(), f.eval(0.37).unwrap());
    }

    #[test]
    fn continuity_examples() {
        let grid = uniform_grid(0.0, 1.0, 11);
        let c = ParametricBody::constant(square(), (0.0, 1.0)).unwrap();
        let rep = continuity_audit(&c, &grid, 1e-9).unwrap();
        assert!(rep.passed() && rep.pairs.iter().all(|p| p.hausdorff == 0.0));

        let rep = continuity_audit(&translating(), &grid, 1e-9).unwrap();
        for p in &rep.pairs {
            assert!((p.modulus - 1.0).abs() < 1e-9, "{p:?}");
        }
        assert!(rep.passed());

        let rep = continuity_audit(&rotating(), &grid, 1e-9).unwrap();
        let bound = FRAC_PI_2 * 2f64.sqrt();
        assert!(rep.max_modulus() <= bound + 1e-12);
        assert!(rep.passed());

        assert!(continuity_audit(&c, &[0.5, 0.2], 0.0).is_err());
    }

    #[test]
    fn exposing_direction_examples() {
        let e = exposing_direction(&square(), &[1.0, 1.0].into()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(
            (e.direction.coords()[0] - s).abs() < 1e-12
                && (e.direction.coords()[1] - s).abs() < 1e-12
        );
        assert!(e.margin > 0.0);
        for v in square().vertices() {
            if v != &Point::from([1.0, 1.0]) {
                let gap =
                    e.direction.apply(&[1.0, 1.0].into()).unwrap() - e.direction.apply(v).unwrap();
                assert!(gap >= e.margin - 1e-12);
            }
        }

        let seg = Polytope::from_points(vec![[0.0, 0.0].into(), [1.0, 0.0].into()]).unwrap();
        let e = exposing_direction(&seg, &[1.0, 0.0].into()).unwrap();
        assert_eq!(e.direction.coords(), &[1.0, 0.0]);
        assert!((e.margin - 1.0).abs() < 1e-15);

        let tri = Polytope::from_points(vec![
            [0.0, 0.0].into(),
            [3.0, 0.0].into(),
            [0.0, 1.0].into(),
        ])
        .unwrap();
        for v in tri.vertices() {
            let e = exposing_direction(&tri, v).unwrap();
            for w in tri.vertices().iter().filter(|w| *w != v) {
                assert!(
                    e.direction.apply(v).unwrap() > e.direction.apply(w).unwrap() + 0.5 * e.margin
                );
            }
        }

        assert!(matches!(
            exposing_direction(&square(), &[0.0, 0.0].into()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tracking_translation() {
        let e0 = Point::from([1.0, 1.0]);
        let ts: Vec<f64> = (1..=50).map(|n| 1.0 / n as f64).collect();
        let tr = track_extreme_point(&translating(), 0.0, &e0, &ts).unwrap();
        for (n, s) in tr.steps.iter().enumerate() {
            let t = 1.0 / (n + 1) as f64;
            assert_eq!(s.point, Point::from([1.0 + t, 1.0]));
            assert!((s.distance_to_start - t).abs() < 1e-12);
            assert!(s.slice_depth.abs() < 1e-12);
        }
    }

    #[test]
    fn tracking_constant_and_rotation() {
        let c = ParametricBody::constant(square(), (0.0, 1.0)).unwrap();
        let e0 = Point::from([-1.0, 1.0]);
        let ts = uniform_grid(0.0, 1.0, 21);
        let tr = track_extreme_point(&c, 0.5, &e0, &ts).unwrap();
        assert!(tr.steps.iter().all(|s| s.point == e0));

        let tr = track_extreme_point(&rotating(), 0.0, &[1.0, 1.0].into(), &ts[..10]).unwrap();
        for s in &tr.steps {
            assert!(s.distance_to_start <= FRAC_PI_2 * 2f64.sqrt() * s.t + 1e-12);
        }
    }

    #[test]
    fn lsc_audit_examples() {
        let grid = uniform_grid(0.0, 1.0, 41);
        let c = ParametricBody::constant(square(), (0.0, 1.0)).unwrap();
        let rep = lsc_ext_audit(&c, &grid, 0.0).unwrap();
        assert!(rep.passed() && rep.max_distance() == 0.0);

        assert!(lsc_ext_audit(&translating(), &grid, 1.5).unwrap().passed());

        let rep = lsc_ext_audit(&roaming(), &grid, 4.1).unwrap();
        assert!(!rep.passed());
        let bad = rep.first_failure().unwrap();
        let pair = &rep.pairs[bad];
        // The roaming point sits at x = 2 - 4t on the way in and leaves the
        // vertex set once it crosses the edge x = 1 at t = 0.25.
        assert!(pair.t0 < 0.25 && pair.t1 >= 0.25, "{pair:?}");
        assert!(pair.worst_vertex.coords()[1] == 0.0);
        assert!(lsc_ext_audit(&c, &[0.3, 0.3], 1.0).is_err());
    }
}
