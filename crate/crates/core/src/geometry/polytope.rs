use crate::error::{check_dim, invalid, Result};
use crate::lp::{LinearProgram, Relation};

use super::point::{dot, Direction, Point};
use super::projection::min_norm_point;

/// Absolute slack on the strict slice inequality, so float ties never drop
/// the maximising face.
pub const SLICE_TOL: f64 = 1e-12;
/// Two input points closer than this (max-norm) are treated as duplicates.
pub const DUPLICATE_TOL: f64 = 1e-12;

/// A compact convex polytope in V-representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    vertices: Vec<Point>,
    reduced: bool,
}

/// Result of a metric projection onto a polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub point: Point,
    pub distance: f64,
    /// Final optimality gap of the nearest-point iteration.
    pub gap: f64,
    /// Vertex indices and barycentric weights expressing `point`.
    pub weights: Vec<(usize, f64)>,
}

impl Polytope {
    /// Wraps a vertex list without redundancy removal.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        validate(&vertices)?;
        Ok(Self {
            vertices,
            reduced: false,
        })
    }

    /// The polytope spanned by `points`, reduced to its extreme points.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        extreme_points(&points)
    }

    /// Caller guarantees `vertices` are nonempty, of equal dimension and
    /// pairwise extreme (e.g. an isometric image of a reduced polytope).
    pub(crate) fn from_reduced_unchecked(vertices: Vec<Point>) -> Self {
        Self {
            vertices,
            reduced: true,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn reduce(&self) -> Polytope {
        if self.reduced {
            return self.clone();
        }
        extreme_points(&self.vertices).expect("validated vertex list")
    }

    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn vertex_mean(&self) -> Point {
        let w = 1.0 / self.vertices.len() as f64;
        Point::weighted_sum(self.vertices.iter().map(|v| (w, v))).unwrap()
    }

    pub fn translate(&self, v: &[f64]) -> Result<Polytope> {
        check_dim(self.dim(), v.len())?;
        Ok(Polytope {
            vertices: self.vertices.iter().map(|p| p.translate(v)).collect(),
            reduced: self.reduced,
        })
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0_f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    /// Support function `c(f, P) = max_v <f, v>`.
    pub fn support(&self, f: &Direction) -> Result<f64> {
        check_dim(self.dim(), f.dim())?;
        Ok(self.support_linear(f.coords()))
    }

    /// `max_v <g, v>` for an arbitrary (not necessarily unit) vector `g`.
    pub(crate) fn support_linear(&self, g: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(g))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the vertex maximising `<f, ·>`. Ties within 1e-12 go to the
    /// lexicographically smallest vertex.
    pub fn argmax(&self, f: &Direction) -> Result<usize> {
        let c = self.support(f)?;
        let best = (0..self.vertices.len())
            .filter(|&i| self.vertices[i].dot(f.coords()) >= c - SLICE_TOL)
            .min_by(|&a, &b| self.vertices[a].lex_cmp(&self.vertices[b]))
            .expect("maximiser always qualifies");
        Ok(best)
    }

    /// Vertices in the open slice `{x : <f0, x> > c(f0, P) - gamma}`.
    pub fn slice(&self, f0: &Direction, gamma: f64) -> Result<Vec<Point>> {
        if !(gamma > 0.0) {
            return Err(invalid(format!(
                "slice depth must be positive, got {gamma}"
            )));
        }
        if !self.reduced {
            return Err(invalid("slice expects a reduced polytope"));
        }
        let threshold = self.support(f0)? - gamma;
        Ok(self
            .vertices
            .iter()
            .filter(|v| v.dot(f0.coords()) > threshold - SLICE_TOL)
            .cloned()
            .collect())
    }

    /// Euclidean projection of `x` onto the polytope and the distance.
    pub fn nearest_point(&self, x: &Point) -> Result<Projection> {
        check_dim(self.dim(), x.dim())?;
        let shifted: Vec<Vec<f64>> = self.vertices.iter().map(|v| v.sub(x)).collect();
        let mn = min_norm_point(&shifted);
        let distance = dot(&mn.y, &mn.y).sqrt();
        let point = if distance == 0.0 {
            x.clone()
        } else if mn.corral.len() == 1 {
            self.vertices[mn.corral[0].0].clone()
        } else {
            x.translate(&mn.y)
        };
        Ok(Projection {
            point,
            distance,
            gap: mn.gap,
            weights: mn.corral,
        })
    }

    /// Euclidean distance from `x` to the polytope.
    pub fn distance(&self, x: &Point) -> Result<f64> {
        Ok(self.nearest_point(x)?.distance)
    }

    /// `true` iff `x` lies within `tol` of the polytope.
    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        if !(tol >= 0.0) {
            return Err(invalid(format!(
                "membership tolerance must be ≥ 0, got {tol}"
            )));
        }
        Ok(self.distance(x)? <= tol)
    }

    /// Index of the vertex nearest to `x` (lowest index on ties) and its distance.
    pub fn nearest_vertex(&self, x: &Point) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, v) in self.vertices.iter().enumerate() {
            let d = v.distance(x);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }
}

fn validate(vertices: &[Point]) -> Result<()> {
    let first = vertices
        .first()
        .ok_or_else(|| invalid("a polytope needs at least one vertex"))?;
    for v in vertices {
        check_dim(first.dim(), v.dim())?;
    }
    Ok(())
}

/// Whether `p` is a convex combination of `others` (feasibility LP).
fn in_convex_hull(p: &Point, others: &[&Point]) -> bool {
    if others.is_empty() {
        return false;
    }
    let mut lp = LinearProgram::new(others.len());
    for k in 0..p.dim() {
        lp.add_row(
            others.iter().map(|q| q.coords()[k]).collect(),
            Relation::Eq,
            p.coords()[k],
        );
    }
    lp.add_row(vec![1.0; others.len()], Relation::Eq, 1.0);
    lp.solve().is_feasible()
}

/// Reduces a point list to its extreme points, keeping first occurrences in
/// input order. Each dropped point is certified redundant by a feasibility LP
/// expressing it as a convex combination of the remaining points.
pub fn extreme_points(points: &[Point]) -> Result<Polytope> {
    validate(points)?;
    let mut unique: Vec<&Point> = Vec::with_capacity(points.len());
    for p in points {
        let dup = unique.iter().any(|q| {
            q.coords()
                .iter()
                .zip(p.coords())
                .all(|(a, b)| (a - b).abs() <= DUPLICATE_TOL)
        });
        if !dup {
            unique.push(p);
        }
    }
    let kept: Vec<Point> = (0..unique.len())
        .filter(|&i| {
            let others: Vec<&Point> = unique
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| *q)
                .collect();
            !in_convex_hull(unique[i], &others)
        })
        .map(|i| unique[i].clone())
        .collect();
    Ok(Polytope {
        vertices: kept,
        reduced: true,
    })
}

/// Sorts vertices lexicographically; useful for set comparisons.
pub fn sorted_vertices(p: &Polytope) -> Vec<Point> {
    let mut v = p.vertices().to_vec();
    v.sort_by(|a, b| a.lex_cmp(b));
    v
}
