//! Point selections of a parametric polytope and the partition-of-unity
//! construction of a weak*-continuous family `t ↦ l_δ(t)` of measures that
//! stays within δ of the representing sets
//! `L(t) = {μ : μ(ext P(t)) = 1, |r(μ) - p(t)| < γ}`.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::{hausdorff, Point};
use crate::measures::{
    barycenter_gap, gamma_represents, in_l, supported_on_extremes, truncation_bound,
    weak_star_distance, DiscreteMeasure, RepresentingMeasureConstraint, TestFunctionFamily,
    DEFAULT_TERMS,
};
use crate::parametric::ParametricBody;
use crate::representation::{choquet_witness, repair_witness};

/// Membership tolerance for projected points.
pub const PROJECTION_TOL: f64 = 1e-10;
/// Resolution of the chart radius bisection.
pub const RADIUS_TOL: f64 = 1e-6;
/// Cap on grid doublings during cover construction.
pub const MAX_DOUBLINGS: u32 = 12;
/// Probes per side of a chart when certifying its radius.
pub const PROBES_PER_SIDE: usize = 8;
/// Audit density relative to the breakpoints of an ε-selection.
pub const AUDIT_FACTOR: usize = 10;
/// Depth cap for adaptive bisection when no Lipschitz bound is declared.
const MAX_ADAPTIVE_DEPTH: u32 = 30;

/// A map `t ↦ p(t)` into the ambient space.
pub trait Selection: Sync {
    fn at(&self, t: f64) -> Result<Point>;
}

fn check_grid(body: &ParametricBody, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("empty grid"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("grid must be strictly increasing"));
    }
    for &t in grid {
        body.check_in_domain(t)?;
    }
    Ok(())
}

/// Piecewise-linear ε-selection built by chain projection.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSelection {
    pub eps: f64,
    pub breakpoints: Vec<f64>,
    pub values: Vec<Point>,
    /// `(t, d(p_ε(t), P(t)))` on the audit grid.
    pub audit: Vec<(f64, f64)>,
}

impl EpsilonSelection {
    pub fn max_audit_distance(&self) -> f64 {
        self.audit.iter().map(|a| a.1).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.audit.iter().all(|a| a.1 < self.eps)
    }
}

impl Selection for EpsilonSelection {
    fn at(&self, t: f64) -> Result<Point> {
        let b = &self.breakpoints;
        let (lo, hi) = (b[0], b[b.len() - 1]);
        if !(t >= lo && t <= hi) {
            return Err(invalid(format!("t = {t} outside [{lo}, {hi}]")));
        }
        let k = b.partition_point(|&x| x <= t);
        if k == 0 || k == b.len() {
            return Ok(self.values[k.saturating_sub(1)].clone());
        }
        let s = (t - b[k - 1]) / (b[k] - b[k - 1]);
        Ok(if s == 0.0 {
            self.values[k - 1].clone()
        } else {
            self.values[k - 1].lerp(&self.values[k], s)
        })
    }
}

/// Refines `grid` so that `h(P(s), P(t)) < eps/2` between consecutive
/// breakpoints, using the declared Lipschitz bound when there is one and
/// adaptive bisection on endpoint Hausdorff distances otherwise.
fn refine(body: &ParametricBody, eps: f64, grid: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![grid[0]];
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        match body.lipschitz() {
            Some(lip) => {
                let pieces = if lip > 0.0 {
                    ((b - a) * lip / (0.5 * eps)).floor() as usize + 1
                } else {
                    1
                };
                for k in 1..pieces {
                    out.push(a + (b - a) * k as f64 / pieces as f64);
                }
            }
            None => {
                let mut stack = vec![(a, b, 0u32)];
                let mut pieces = Vec::new();
                while let Some((x, y, depth)) = stack.pop() {
                    let h = hausdorff(&body.eval(x)?, &body.eval(y)?)?;
                    if h < 0.5 * eps {
                        pieces.push(y);
                    } else if depth >= MAX_ADAPTIVE_DEPTH {
                        return Err(Error::Refinement {
                            t: x,
                            reason: format!("Hausdorff jump {h:e} persists at width {:e}", y - x),
                        });
                    } else {
                        let m = 0.5 * (x + y);
                        stack.push((m, y, depth + 1));
                        stack.push((x, m, depth + 1));
                    }
                }
                out.extend(pieces.into_iter().filter(|&t| t != b));
            }
        }
        out.push(b);
    }
    Ok(out)
}

/// ε-selection of `P` over `[grid[0], grid[last]]`: chain projection at the
/// breakpoints starting from the vertex mean of `P(grid[0])`, linear in
/// between, audited on a grid `AUDIT_FACTOR` times denser than the
/// breakpoints.
pub fn michael_epsilon_selection(
    body: &ParametricBody,
    eps: f64,
    grid: &[f64],
) -> Result<EpsilonSelection> {
    if !(eps > 0.0) {
        return Err(invalid(format!("eps must be > 0, got {eps}")));
    }
    check_grid(body, grid)?;
    let breakpoints = refine(body, eps, grid)?;
    let bodies = body.eval_many(&breakpoints)?;
    let mut values = Vec::with_capacity(breakpoints.len());
    let mut prev = bodies[0].vertex_mean();
    for p in &bodies {
        prev = p.nearest_point(&prev)?.point;
        values.push(prev.clone());
    }
    let mut sel = EpsilonSelection {
        eps,
        breakpoints,
        values,
        audit: Vec::new(),
    };
    let mut ts = vec![sel.breakpoints[0]];
    for w in sel.breakpoints.windows(2) {
        for k in 1..AUDIT_FACTOR {
            ts.push(w[0] + (w[1] - w[0]) * k as f64 / AUDIT_FACTOR as f64);
        }
        ts.push(w[1]);
    }
    sel.audit = ts
        .par_iter()
        .map(|&t| Ok((t, body.eval(t)?.distance(&sel.at(t)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(sel)
}

/// `p(t)` = metric projection of `x_ref` onto `P(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSelection {
    body: ParametricBody,
    x_ref: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionPoint {
    pub t: f64,
    pub point: Point,
    /// `d(p(t), P(t))`, recomputed independently of the projection.
    pub membership: f64,
    /// `d(x_ref, P(t))`.
    pub reference_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionPair {
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
    pub hausdorff: f64,
    /// `h·(d(x_ref, P(t0)) + d(x_ref, P(t1)))`, an upper bound on `step²`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionAudit {
    pub points: Vec<SelectionPoint>,
    pub pairs: Vec<SelectionPair>,
}

impl SelectionAudit {
    pub fn max_membership(&self) -> f64 {
        self.points.iter().map(|p| p.membership).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_membership() <= PROJECTION_TOL && self.pairs.iter().all(|p| p.pass)
    }
}

impl ProjectionSelection {
    pub fn body(&self) -> &ParametricBody {
        &self.body
    }

    pub fn reference(&self) -> &Point {
        &self.x_ref
    }

    /// Membership and projection stability on a grid. For projections `a`,
    /// `b` of `x` onto convex `A`, `B` with `h(A, B) = h` the variational
    /// inequalities give `|a - b|² ≤ h·(d(x, A) + d(x, B))`.
    pub fn audit(&self, grid: &[f64]) -> Result<SelectionAudit> {
        check_grid(&self.body, grid)?;
        let bodies = self.body.eval_many(grid)?;
        let points = grid
            .par_iter()
            .zip(&bodies)
            .map(|(&t, p)| {
                let proj = p.nearest_point(&self.x_ref)?;
                Ok(SelectionPoint {
                    t,
                    membership: p.distance(&proj.point)?,
                    point: proj.point,
                    reference_distance: proj.distance,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let pairs = (0..grid.len() - 1)
            .into_par_iter()
            .map(|i| {
                let (a, b) = (&points[i], &points[i + 1]);
                let h = hausdorff(&bodies[i], &bodies[i + 1])?;
                let step = a.point.distance(&b.point);
                let bound = h * (a.reference_distance + b.reference_distance);
                let slack = 1e-12 * (1.0 + a.reference_distance + b.reference_distance).powi(2);
                Ok(SelectionPair {
                    t0: a.t,
                    t1: b.t,
                    step,
                    hausdorff: h,
                    bound,
                    pass: step * step <= bound + slack,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SelectionAudit { points, pairs })
    }
}

impl Selection for ProjectionSelection {
    fn at(&self, t: f64) -> Result<Point> {
        Ok(self.body.eval(t)?.nearest_point(&self.x_ref)?.point)
    }
}

/// Continuous selection `t ↦ proj_{P(t)}(x_ref)`.
pub fn continuous_selection(body: &ParametricBody, x_ref: Point) -> Result<ProjectionSelection> {
    crate::error::check_dim(body.dim(), x_ref.dim())?;
    Ok(ProjectionSelection {
        body: body.clone(),
        x_ref,
    })
}

/// Parameters of the δ-selection construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaConfig {
    pub gamma: f64,
    pub delta: f64,
    /// Number of weak* terms `N`; needs `2^{-N} < δ/4`.
    pub n_terms: usize,
    pub ext_tolerance: f64,
}

impl DeltaConfig {
    pub fn new(gamma: f64, delta: f64) -> Self {
        Self {
            gamma,
            delta,
            n_terms: DEFAULT_TERMS,
            ext_tolerance: 1e-9,
        }
    }

    pub fn validate(&self, fam: &TestFunctionFamily) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(invalid(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if !(self.delta > 0.0) {
            return Err(invalid(format!("delta must be > 0, got {}", self.delta)));
        }
        if !(0.5 * truncation_bound(self.n_terms) < 0.25 * self.delta) {
            return Err(invalid(format!(
                "N = {} is too small: need 2^-N < delta/4 = {:e}",
                self.n_terms,
                0.25 * self.delta
            )));
        }
        if self.n_terms > fam.len() {
            return Err(invalid(format!(
                "N = {} exceeds the {} test functions",
                self.n_terms,
                fam.len()
            )));
        }
        if !(self.ext_tolerance >= 0.0) {
            return Err(invalid("ext_tolerance must be ≥ 0"));
        }
        Ok(())
    }

    /// The constraint defining `L(t)`.
    pub fn constraint(
        &self,
        body: &ParametricBody,
        p: &dyn Selection,
        t: f64,
    ) -> Result<RepresentingMeasureConstraint> {
        RepresentingMeasureConstraint::new(body.eval(t)?, p.at(t)?, self.gamma, self.ext_tolerance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub center: f64,
    pub radius: f64,
    pub witness: DiscreteMeasure,
}

impl Chart {
    pub fn contains(&self, t: f64) -> bool {
        (t - self.center).abs() < self.radius
    }
}

/// Open cover of the parameter interval by charts `(t_α - r_α, t_α + r_α)`,
/// each carrying a witness in `L(t_α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverWithWitnesses {
    domain: (f64, f64),
    charts: Vec<Chart>,
    doublings: u32,
}

/// Closed subintervals of `[lo, hi]` missed by the open charts (possibly
/// single points where two charts only touch).
fn uncovered(domain: (f64, f64), charts: &[Chart]) -> Vec<(f64, f64)> {
    let mut iv: Vec<(f64, f64)> = charts
        .iter()
        .filter(|c| c.radius > 0.0)
        .map(|c| (c.center - c.radius, c.center + c.radius))
        .collect();
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lo, hi) = domain;
    let mut gaps = Vec::new();
    // `cur` is the smallest point not yet known to be covered; `far` the
    // largest right end among intervals opening before `cur`.
    let mut cur = lo;
    let mut far = f64::NEG_INFINITY;
    let mut i = 0;
    loop {
        while i < iv.len() && iv[i].0 < cur {
            far = far.max(iv[i].1);
            i += 1;
        }
        if far > cur {
            cur = far;
            continue;
        }
        if cur > hi {
            break;
        }
        let next = iv.get(i).map_or(f64::INFINITY, |x| x.0);
        gaps.push((cur, next.min(hi)));
        if next > hi {
            break;
        }
        while i < iv.len() && iv[i].0 <= next {
            far = far.max(iv[i].1);
            i += 1;
        }
        cur = far;
    }
    gaps
}

impl CoverWithWitnesses {
    /// Validates that the charts cover `domain`.
    pub fn from_charts(domain: (f64, f64), charts: Vec<Chart>) -> Result<Self> {
        if charts.iter().any(|c| !(c.radius > 0.0)) {
            return Err(invalid("chart radii must be > 0"));
        }
        if let Some(&(a, b)) = uncovered(domain, &charts).first() {
            return Err(Error::Coverage {
                t: 0.5 * (a + b),
                doublings: 0,
            });
        }
        Ok(Self {
            domain,
            charts,
            doublings: 0,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    /// Grid doublings used during construction.
    pub fn doublings(&self) -> u32 {
        self.doublings
    }

    pub fn min_radius(&self) -> f64 {
        self.charts
            .iter()
            .map(|c| c.radius)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Does every probe of radius `r` around the chart keep the repaired
/// witness within δ/2 of `witness`?
fn radius_ok(
    body: &ParametricBody,
    p: &dyn Selection,
    cfg: &DeltaConfig,
    fam: &TestFunctionFamily,
    center: f64,
    witness: &DiscreteMeasure,
    r: f64,
) -> bool {
    let (lo, hi) = body.domain();
    for k in 1..=PROBES_PER_SIDE {
        let off = r * k as f64 / PROBES_PER_SIDE as f64;
        for t in [center - off, center + off] {
            if t < lo || t > hi {
                continue;
            }
            let ok = cfg
                .constraint(body, p, t)
                .and_then(|c| repair_witness(witness, &c))
                .and_then(|rep| weak_star_distance(witness, &rep.measure, fam, cfg.n_terms))
                .is_ok_and(|d| d < 0.5 * cfg.delta);
            if !ok {
                return false;
            }
        }
    }
    true
}

fn certify_chart(
    body: &ParametricBody,
    p: &dyn Selection,
    cfg: &DeltaConfig,
    fam: &TestFunctionFamily,
    center: f64,
    cap: f64,
) -> Result<Chart> {
    let witness = choquet_witness(&cfg.constraint(body, p, center)?)?;
    let ok = |r: f64| radius_ok(body, p, cfg, fam, center, &witness, r);
    let radius = if ok(cap) {
        cap
    } else {
        let (mut lo, mut hi) = (0.0, cap);
        while hi - lo > RADIUS_TOL {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    Ok(Chart {
        center,
        radius,
        witness,
    })
}

/// Builds charts at the points of `init_grid`, certifying each radius by
/// bisection, then halves the grid spacing (adding charts only where the
/// cover still has holes) up to `MAX_DOUBLINGS` times.
pub fn build_cover(
    body: &ParametricBody,
    p: &dyn Selection,
    cfg: &DeltaConfig,
    fam: &TestFunctionFamily,
    init_grid: &[f64],
) -> Result<CoverWithWitnesses> {
    cfg.validate(fam)?;
    check_grid(body, init_grid)?;
    let domain = body.domain();
    let caps: Vec<f64> = (0..init_grid.len())
        .map(|i| {
            let left = if i > 0 {
                init_grid[i] - init_grid[i - 1]
            } else {
                0.0
            };
            let right = init_grid.get(i + 1).map_or(0.0, |&b| b - init_grid[i]);
            let s = left.max(right);
            if s > 0.0 {
                s
            } else {
                (domain.1 - domain.0).max(RADIUS_TOL)
            }
        })
        .collect();
    let mut grid = init_grid.to_vec();
    let mut charts: Vec<Chart> = init_grid
        .par_iter()
        .zip(&caps)
        .map(|(&t, &cap)| certify_chart(body, p, cfg, fam, t, cap))
        .collect::<Result<Vec<_>>>()?;
    let mut doublings = 0;
    loop {
        charts.retain(|c| c.radius > 0.0);
        let gaps = uncovered(domain, &charts);
        if gaps.is_empty() {
            break;
        }
        let widest = gaps
            .iter()
            .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))
            .unwrap();
        if doublings == MAX_DOUBLINGS {
            return Err(Error::Coverage {
                t: 0.5 * (widest.0 + widest.1),
                doublings,
            });
        }
        doublings += 1;
        let mut fresh = Vec::new();
        let mut next = vec![grid[0]];
        for w in grid.windows(2) {
            let m = 0.5 * (w[0] + w[1]);
            if gaps.iter().any(|&(x, y)| w[0] <= y && x <= w[1]) {
                fresh.push((m, 0.5 * (w[1] - w[0])));
            }
            next.push(m);
            next.push(w[1]);
        }
        grid = next;
        let new_charts = fresh
            .par_iter()
            .map(|&(t, cap)| certify_chart(body, p, cfg, fam, t, cap))
            .collect::<Result<Vec<_>>>()?;
        charts.extend(new_charts);
    }
    charts.sort_by(|a, b| a.center.total_cmp(&b.center));
    Ok(CoverWithWitnesses {
        domain,
        charts,
        doublings,
    })
}

/// Normalised tent functions `e_α(t) ∝ max(0, r_α - |t - t_α|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOfUnity {
    domain: (f64, f64),
    tents: Vec<(f64, f64)>,
}

impl PartitionOfUnity {
    pub fn new(cover: &CoverWithWitnesses) -> Self {
        Self {
            domain: cover.domain,
            tents: cover.charts.iter().map(|c| (c.center, c.radius)).collect(),
        }
    }

    /// Nonzero weights `(α, e_α(t))`, in chart order.
    pub fn weights(&self, t: f64) -> Result<Vec<(usize, f64)>> {
        if !(t >= self.domain.0 && t <= self.domain.1) {
            return Err(invalid(format!(
                "t = {t} outside [{}, {}]",
                self.domain.0, self.domain.1
            )));
        }
        let raw: Vec<(usize, f64)> = self
            .tents
            .iter()
            .enumerate()
            .map(|(i, &(c, r))| (i, (r - (t - c).abs()).max(0.0)))
            .filter(|&(_, w)| w > 0.0)
            .collect();
        let total: f64 = raw.iter().map(|w| w.1).sum();
        if !(total > 0.0) {
            return Err(Error::Coverage { t, doublings: 0 });
        }
        Ok(raw.into_iter().map(|(i, w)| (i, w / total)).collect())
    }

    pub fn weight(&self, alpha: usize, t: f64) -> Result<f64> {
        Ok(self
            .weights(t)?
            .into_iter()
            .find(|&(i, _)| i == alpha)
            .map_or(0.0, |w| w.1))
    }
}

/// `l_δ(t) = Σ_α e_α(t) μ_α`.
pub fn l_delta(
    cover: &CoverWithWitnesses,
    pou: &PartitionOfUnity,
    t: f64,
) -> Result<DiscreteMeasure> {
    let w = pou.weights(t)?;
    DiscreteMeasure::mixture(w.iter().map(|&(i, e)| (e, &cover.charts[i].witness)))
}

/// Which member of `L(t)` certified the distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessRoute {
    /// `repair_witness(l_δ(t))`.
    Direct,
    /// `Σ_α e_α(t) · repair_witness(μ_α)`, a convex combination of members.
    ChartMixture,
}

impl WitnessRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessRoute::Direct => "direct",
            WitnessRoute::ChartMixture => "chart_mixture",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaRow {
    pub t: f64,
    pub weights: Vec<(usize, f64)>,
    pub witness: DiscreteMeasure,
    pub route: WitnessRoute,
    /// Weak* distance from `l_δ(t)` to the witness; bounds the distance to `L(t)`.
    pub distance: f64,
    pub barycenter_gap: f64,
    pub represents: bool,
    pub supported: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    pub delta: f64,
    pub rows: Vec<DeltaRow>,
    /// `max_i d(l_δ(t_i), l_δ(t_{i+1})) / (t_{i+1} - t_i)`.
    pub weak_star_modulus: f64,
}

impl DeltaReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn max_distance(&self) -> f64 {
        self.rows.iter().map(|r| r.distance).fold(0.0, f64::max)
    }
}

/// Audits `l_δ` against `L(t)` on `audit_grid`.
pub fn verify_delta_selection(
    body: &ParametricBody,
    p: &dyn Selection,
    cover: &CoverWithWitnesses,
    pou: &PartitionOfUnity,
    cfg: &DeltaConfig,
    fam: &TestFunctionFamily,
    audit_grid: &[f64],
) -> Result<DeltaReport> {
    cfg.validate(fam)?;
    check_grid(body, audit_grid)?;
    let n = cfg.n_terms;
    let rows = audit_grid
        .par_iter()
        .map(|&t| -> Result<(DeltaRow, DiscreteMeasure)> {
            let c = cfg.constraint(body, p, t)?;
            let weights = pou.weights(t)?;
            let mu = DiscreteMeasure::mixture(
                weights.iter().map(|&(i, e)| (e, &cover.charts[i].witness)),
            )?;
            let direct = repair_witness(&mu, &c)?.measure;
            let d_direct = weak_star_distance(&mu, &direct, fam, n)?;
            let mut best = (direct, d_direct, WitnessRoute::Direct);
            if d_direct > 0.0 && weights.len() > 1 {
                let parts = weights
                    .iter()
                    .map(|&(i, e)| Ok((e, repair_witness(&cover.charts[i].witness, &c)?.measure)))
                    .collect::<Result<Vec<_>>>()?;
                let mixed = DiscreteMeasure::mixture(parts.iter().map(|(e, m)| (*e, m)))?;
                let d_mixed = weak_star_distance(&mu, &mixed, fam, n)?;
                if d_mixed < d_direct && in_l(&mixed, &c) {
                    best = (mixed, d_mixed, WitnessRoute::ChartMixture);
                }
            }
            let (witness, distance, route) = best;
            let gap = barycenter_gap(&witness, c.target())?;
            let represents = gamma_represents(&witness, c.target(), cfg.gamma)?;
            let supported = supported_on_extremes(&witness, c.body(), cfg.ext_tolerance)?;
            let row = DeltaRow {
                t,
                weights,
                witness,
                route,
                distance,
                barycenter_gap: gap,
                represents,
                supported,
                pass: distance < cfg.delta && represents && supported,
            };
            Ok((row, mu))
        })
        .collect::<Result<Vec<_>>>()?;
    let modulus = (0..rows.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let d = weak_star_distance(&rows[i].1, &rows[i + 1].1, fam, n)?;
            Ok(d / (rows[i + 1].0.t - rows[i].0.t))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(DeltaReport {
        delta: cfg.delta,
        rows: rows.into_iter().map(|r| r.0).collect(),
        weak_star_modulus: modulus,
    })
}
