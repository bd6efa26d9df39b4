//! Scenario configuration: TOML parsing, validation with line-anchored
//! diagnostics, and resolution of every default.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::geometry::{Point, Polytope};
use crate::measures::{truncation_bound, DEFAULT_TERMS};
use crate::parametric::{ParametricBody, Polynomial};

/// Every stage, in execution order.
pub const STAGES: [&str; 6] = [
    "continuity_audit",
    "lsc_ext_audit",
    "track",
    "select",
    "build_cover",
    "verify_delta_selection",
];

pub const DEFAULT_GAMMA: f64 = 0.1;
pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_GRID_POINTS: usize = 11;
pub const DEFAULT_AUDIT_POINTS: usize = 1001;
pub const DEFAULT_EXT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_CONTINUITY_TOL: f64 = 1e-9;
pub const DEFAULT_TRACK_POINTS: usize = 1000;

/// A configuration problem, anchored at a line of the source file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: ", self.file, self.line, self.column)?;
        if let Some(field) = &self.field {
            write!(f, "`{field}`: ")?;
        }
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<RawScenario>,
    family: Spanned<RawFamily>,
    parameters: Option<RawParameters>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<Spanned<String>>,
    seed: Option<Spanned<u64>>,
    stages: Option<Spanned<Vec<Spanned<String>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    kind: Spanned<String>,
    base: Option<Spanned<Vec<Vec<f64>>>>,
    domain: Option<Spanned<Vec<f64>>>,
    lipschitz: Option<Spanned<f64>>,
    matrix: Option<Spanned<Vec<Vec<Vec<f64>>>>>,
    offset: Option<Spanned<Vec<Vec<f64>>>>,
    rate: Option<Spanned<f64>>,
    center: Option<Spanned<Vec<f64>>>,
    breakpoints: Option<Spanned<Vec<f64>>>,
    paths: Option<Spanned<Vec<Vec<Vec<f64>>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParameters {
    gamma: Option<Spanned<f64>>,
    delta: Option<Spanned<f64>>,
    eps: Option<Spanned<f64>>,
    n_terms: Option<Spanned<usize>>,
    grid_points: Option<Spanned<usize>>,
    audit_points: Option<Spanned<usize>>,
    x_ref: Option<Spanned<Vec<f64>>>,
    ext_tolerance: Option<Spanned<f64>>,
    continuity_tol: Option<Spanned<f64>>,
    lsc_tol_slope: Option<Spanned<f64>>,
    track_t0: Option<Spanned<f64>>,
    track_vertex: Option<Spanned<Vec<f64>>>,
    track_points: Option<Spanned<usize>>,
}

/// A fully resolved scenario: no optional values remain.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub stages: Vec<String>,
    pub body: ParametricBody,
    pub gamma: f64,
    pub delta: f64,
    pub eps: f64,
    pub n_terms: usize,
    pub grid_points: usize,
    pub audit_points: usize,
    pub x_ref: Point,
    pub ext_tolerance: f64,
    pub continuity_tol: f64,
    pub lsc_tol_slope: f64,
    pub track_t0: f64,
    pub track_vertex: Point,
    pub track_points: usize,
}

struct Ctx<'a> {
    file: String,
    text: &'a str,
}

impl Ctx<'_> {
    fn at(
        &self,
        span: Range<usize>,
        field: Option<&str>,
        message: impl Into<String>,
    ) -> ConfigError {
        let start = span.start.min(self.text.len());
        let before = &self.text[..start];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        ConfigError {
            file: self.file.clone(),
            line,
            column,
            field: field.map(str::to_string),
            message: message.into(),
        }
    }

    fn bad<T>(&self, v: &Spanned<T>, field: &str, message: impl Into<String>) -> ConfigError {
        self.at(v.span(), Some(field), message)
    }

    fn positive(
        &self,
        v: Option<&Spanned<f64>>,
        field: &str,
        default: f64,
    ) -> Result<f64, ConfigError> {
        match v {
            None => Ok(default),
            Some(s) if *s.get_ref() > 0.0 && s.get_ref().is_finite() => Ok(*s.get_ref()),
            Some(s) => Err(self.bad(
                s,
                field,
                format!("must be a finite number > 0, got {}", s.get_ref()),
            )),
        }
    }

    fn nonnegative(
        &self,
        v: Option<&Spanned<f64>>,
        field: &str,
        default: f64,
    ) -> Result<f64, ConfigError> {
        match v {
            None => Ok(default),
            Some(s) if *s.get_ref() >= 0.0 && s.get_ref().is_finite() => Ok(*s.get_ref()),
            Some(s) => Err(self.bad(
                s,
                field,
                format!("must be a finite number ≥ 0, got {}", s.get_ref()),
            )),
        }
    }

    fn point(&self, v: &Spanned<Vec<f64>>, field: &str, dim: usize) -> Result<Point, ConfigError> {
        if v.get_ref().len() != dim {
            return Err(self.bad(
                v,
                field,
                format!("expected {dim} coordinates, found {}", v.get_ref().len()),
            ));
        }
        Point::new(v.get_ref().clone()).map_err(|e| self.bad(v, field, e.to_string()))
    }

    fn points(&self, v: &Spanned<Vec<Vec<f64>>>, field: &str) -> Result<Vec<Point>, ConfigError> {
        let rows = v.get_ref();
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(self.bad(
                v,
                field,
                "needs at least one point with at least one coordinate",
            ));
        }
        rows.iter()
            .map(|r| {
                if r.len() != dim {
                    Err(self.bad(v, field, format!("all points need {dim} coordinates")))
                } else {
                    Point::new(r.clone()).map_err(|e| self.bad(v, field, e.to_string()))
                }
            })
            .collect()
    }

    fn missing(&self, span: Range<usize>, field: &str, kind: &str) -> ConfigError {
        self.at(span, Some(field), format!("required for kind = \"{kind}\""))
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            file: file.clone(),
            line: 0,
            column: 0,
            field: None,
            message: format!("cannot read config: {e}"),
        })?;
        Self::parse(&text, &file)
    }

    /// Parses and validates `text`; `file` is used in diagnostics.
    pub fn parse(text: &str, file: &str) -> Result<Self, ConfigError> {
        let cx = Ctx {
            file: file.to_string(),
            text,
        };
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let span = e.span().unwrap_or(0..0);
            cx.at(span, None, e.message().trim().to_string())
        })?;
        let fam_span = raw.family.span();
        let family = raw.family.into_inner();
        let body = resolve_family(&cx, fam_span.clone(), &family)?;
        let dim = body.dim();
        let domain = body.domain();

        let sc = raw.scenario.unwrap_or(RawScenario {
            name: None,
            seed: None,
            stages: None,
        });
        let name = sc.name.map_or_else(
            || {
                Path::new(file)
                    .file_stem()
                    .map_or("scenario".into(), |s| s.to_string_lossy().into_owned())
            },
            Spanned::into_inner,
        );
        let seed = sc.seed.map_or(0, Spanned::into_inner);
        let stages = match &sc.stages {
            None => STAGES.iter().map(|s| s.to_string()).collect(),
            Some(list) => {
                let mut out = Vec::new();
                for s in list.get_ref() {
                    if !STAGES.contains(&s.get_ref().as_str()) {
                        return Err(cx.bad(
                            s,
                            "scenario.stages",
                            format!(
                                "unknown stage \"{}\"; expected one of {}",
                                s.get_ref(),
                                STAGES.join(", ")
                            ),
                        ));
                    }
                    out.push(s.get_ref().clone());
                }
                if out.contains(&"verify_delta_selection".to_string())
                    && !out.contains(&"build_cover".to_string())
                {
                    return Err(cx.bad(
                        list,
                        "scenario.stages",
                        "verify_delta_selection needs build_cover",
                    ));
                }
                // Run in canonical order regardless of listing order.
                STAGES
                    .iter()
                    .filter(|s| out.iter().any(|o| o == *s))
                    .map(|s| s.to_string())
                    .collect()
            }
        };

        let p = raw.parameters.unwrap_or(RawParameters {
            gamma: None,
            delta: None,
            eps: None,
            n_terms: None,
            grid_points: None,
            audit_points: None,
            x_ref: None,
            ext_tolerance: None,
            continuity_tol: None,
            lsc_tol_slope: None,
            track_t0: None,
            track_vertex: None,
            track_points: None,
        });
        let gamma = cx.positive(p.gamma.as_ref(), "parameters.gamma", DEFAULT_GAMMA)?;
        let delta = cx.positive(p.delta.as_ref(), "parameters.delta", DEFAULT_DELTA)?;
        let eps = cx.positive(p.eps.as_ref(), "parameters.eps", DEFAULT_EPS)?;
        let n_terms = match &p.n_terms {
            None => DEFAULT_TERMS,
            Some(n) => {
                let v = *n.get_ref();
                if !(1..=1000).contains(&v) {
                    return Err(cx.bad(
                        n,
                        "parameters.n_terms",
                        format!("must lie in 1..=1000, got {v}"),
                    ));
                }
                v
            }
        };
        if !(0.5 * truncation_bound(n_terms) < 0.25 * delta) {
            let span = match (&p.n_terms, &p.delta) {
                (Some(n), _) => n.span(),
                (None, Some(d)) => d.span(),
                (None, None) => 0..0,
            };
            return Err(cx.at(
                span,
                Some("parameters.n_terms"),
                format!("need 2^-N < delta/4; N = {n_terms} is too small for delta = {delta}"),
            ));
        }
        let count = |v: &Option<Spanned<usize>>, field: &str, default: usize, min: usize| match v {
            None => Ok(default),
            Some(s) if *s.get_ref() >= min => Ok(*s.get_ref()),
            Some(s) => Err(cx.bad(s, field, format!("must be ≥ {min}, got {}", s.get_ref()))),
        };
        let grid_points = count(
            &p.grid_points,
            "parameters.grid_points",
            DEFAULT_GRID_POINTS,
            2,
        )?;
        let audit_points = count(
            &p.audit_points,
            "parameters.audit_points",
            DEFAULT_AUDIT_POINTS,
            2,
        )?;
        let track_points = count(
            &p.track_points,
            "parameters.track_points",
            DEFAULT_TRACK_POINTS,
            1,
        )?;
        let ext_tolerance = cx.nonnegative(
            p.ext_tolerance.as_ref(),
            "parameters.ext_tolerance",
            DEFAULT_EXT_TOLERANCE,
        )?;
        let continuity_tol = cx.nonnegative(
            p.continuity_tol.as_ref(),
            "parameters.continuity_tol",
            DEFAULT_CONTINUITY_TOL,
        )?;
        let lsc_tol_slope =
            match (&p.lsc_tol_slope, body.lipschitz()) {
                (Some(s), _) => cx.nonnegative(Some(s), "parameters.lsc_tol_slope", 0.0)?,
                (None, Some(lip)) => lip + continuity_tol,
                (None, None) => return Err(cx.at(
                    fam_span,
                    Some("parameters.lsc_tol_slope"),
                    "no Lipschitz bound is declared for the family, so lsc_tol_slope must be given",
                )),
            };

        let start = body
            .eval(domain.0)
            .map_err(|e| cx.at(fam_span.clone(), Some("family"), e.to_string()))?;
        let x_ref = match &p.x_ref {
            Some(v) => cx.point(v, "parameters.x_ref", dim)?,
            None => start.vertex_mean(),
        };
        let track_t0 = match &p.track_t0 {
            None => domain.0,
            Some(s) => {
                let t = *s.get_ref();
                if !(t >= domain.0 && t <= domain.1) {
                    return Err(cx.bad(
                        s,
                        "parameters.track_t0",
                        format!("{t} lies outside the domain {domain:?}"),
                    ));
                }
                t
            }
        };
        let at_t0 = body
            .eval(track_t0)
            .map_err(|e| cx.at(fam_span.clone(), Some("family"), e.to_string()))?;
        let track_vertex = match &p.track_vertex {
            None => crate::geometry::sorted_vertices(&at_t0)
                .pop()
                .expect("polytopes are nonempty"),
            Some(v) => {
                let pt = cx.point(v, "parameters.track_vertex", dim)?;
                if at_t0.vertex_index(&pt).is_none() {
                    return Err(cx.bad(
                        v,
                        "parameters.track_vertex",
                        format!("{pt} is not a vertex of P({track_t0})"),
                    ));
                }
                pt
            }
        };

        Ok(Scenario {
            name,
            seed,
            stages,
            body,
            gamma,
            delta,
            eps,
            n_terms,
            grid_points,
            audit_points,
            x_ref,
            ext_tolerance,
            continuity_tol,
            lsc_tol_slope,
            track_t0,
            track_vertex,
            track_points,
        })
    }

    /// Human-readable plan with every value made explicit.
    pub fn describe(&self) -> String {
        let b = &self.body;
        let (lo, hi) = b.domain();
        let mut s = String::new();
        let mut line = |l: String| {
            s.push_str(&l);
            s.push('\n');
        };
        line(format!("scenario {} (seed {})", self.name, self.seed));
        line(format!("stages: {}", self.stages.join(", ")));
        line(format!(
            "family: {} in dimension {}, t ∈ [{lo}, {hi}]",
            b.family().kind(),
            b.dim()
        ));
        match b.lipschitz() {
            Some(l) => line(format!("Lipschitz bound: {l}")),
            None => line("Lipschitz bound: none declared (adaptive refinement)".into()),
        }
        line(format!(
            "P({lo}) vertices: {}",
            b.eval(lo).map_or(0, |p| p.vertices().len())
        ));
        line(format!("gamma = {}", self.gamma));
        line(format!("delta = {}", self.delta));
        line(format!("eps = {}", self.eps));
        line(format!(
            "N = {} (weak* truncation bound 2^(1-N) = {:e})",
            self.n_terms,
            truncation_bound(self.n_terms)
        ));
        line(format!("grid_points = {}", self.grid_points));
        line(format!("audit_points = {}", self.audit_points));
        line(format!("x_ref = {}", self.x_ref));
        line(format!("ext_tolerance = {:e}", self.ext_tolerance));
        line(format!("continuity_tol = {:e}", self.continuity_tol));
        line(format!("lsc_tol_slope = {}", self.lsc_tol_slope));
        line(format!("track_t0 = {}", self.track_t0));
        line(format!("track_vertex = {}", self.track_vertex));
        line(format!("track_points = {}", self.track_points));
        s
    }
}

fn span_of<T>(v: &Option<Spanned<T>>) -> Option<Range<usize>> {
    v.as_ref().map(Spanned::span)
}

fn resolve_family(
    cx: &Ctx<'_>,
    span: Range<usize>,
    f: &RawFamily,
) -> Result<ParametricBody, ConfigError> {
    let kind = f.kind.get_ref().as_str();
    let domain = |required: bool| -> Result<Option<(f64, f64)>, ConfigError> {
        match &f.domain {
            None if required => Err(cx.missing(span.clone(), "family.domain", kind)),
            None => Ok(None),
            Some(d) => match d.get_ref().as_slice() {
                &[a, b] if a.is_finite() && b.is_finite() && a < b => Ok(Some((a, b))),
                _ => Err(cx.bad(d, "family.domain", "expected [t_lo, t_hi] with t_lo < t_hi")),
            },
        }
    };
    let base = || -> Result<Polytope, ConfigError> {
        let b = f
            .base
            .as_ref()
            .ok_or_else(|| cx.missing(span.clone(), "family.base", kind))?;
        let pts = cx.points(b, "family.base")?;
        Polytope::from_points(pts).map_err(|e| cx.bad(b, "family.base", e.to_string()))
    };
    let unused = |spans: &[(Option<Range<usize>>, &str)]| -> Result<(), ConfigError> {
        match spans.iter().find(|s| s.0.is_some()) {
            Some((Some(span), name)) => Err(cx.at(
                span.clone(),
                Some(name),
                format!("not used by kind = \"{kind}\""),
            )),
            _ => Ok(()),
        }
    };
    let body = match kind {
        "affine" => {
            unused(&[(span_of(&f.rate), "family.rate"), (span_of(&f.center), "family.center"), (span_of(&f.breakpoints), "family.breakpoints"), (span_of(&f.paths), "family.paths")])?;
            let base = base()?;
            let d = base.dim();
            let matrix = match &f.matrix {
                None => (0..d)
                    .map(|i| (0..d).map(|j| Polynomial::constant(if i == j { 1.0 } else { 0.0 })).collect())
                    .collect(),
                Some(m) => {
                    let rows = m.get_ref();
                    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                        return Err(cx.bad(m, "family.matrix", format!("expected a {d}×{d} array of coefficient lists")));
                    }
                    rows.iter()
                        .map(|r| r.iter().map(|c| Polynomial(c.clone())).collect())
                        .collect()
                }
            };
            let offset = match &f.offset {
                None => vec![Polynomial::constant(0.0); d],
                Some(o) => {
                    if o.get_ref().len() != d {
                        return Err(cx.bad(o, "family.offset", format!("expected {d} coefficient lists")));
                    }
                    o.get_ref().iter().map(|c| Polynomial(c.clone())).collect()
                }
            };
            let dom = domain(true)?.unwrap();
            ParametricBody::affine(base, matrix, offset, dom).map_err(|e| cx.at(span.clone(), Some("family"), e.to_string()))?
        }
        "rotation" => {
            unused(&[(span_of(&f.matrix), "family.matrix"), (span_of(&f.offset), "family.offset"), (span_of(&f.breakpoints), "family.breakpoints"), (span_of(&f.paths), "family.paths")])?;
            let base = base()?;
            if base.dim() != 2 {
                return Err(cx.bad(f.base.as_ref().unwrap(), "family.base", "rotation families are planar"));
            }
            let rate = f.rate.as_ref().ok_or_else(|| cx.missing(span.clone(), "family.rate", kind))?;
            if !rate.get_ref().is_finite() {
                return Err(cx.bad(rate, "family.rate", "must be finite"));
            }
            let center = match &f.center {
                None => Point::origin(2),
                Some(c) => cx.point(c, "family.center", 2)?,
            };
            let dom = domain(true)?.unwrap();
            ParametricBody::rotation(base, *rate.get_ref(), center, dom)
                .map_err(|e| cx.at(span.clone(), Some("family"), e.to_string()))?
        }
        "vertex_interpolation" => {
            unused(&[(span_of(&f.base), "family.base"), (span_of(&f.matrix), "family.matrix"), (span_of(&f.offset), "family.offset"), (span_of(&f.rate), "family.rate"), (span_of(&f.center), "family.center")])?;
            let bp = f.breakpoints.as_ref().ok_or_else(|| cx.missing(span.clone(), "family.breakpoints", kind))?;
            let paths = f.paths.as_ref().ok_or_else(|| cx.missing(span.clone(), "family.paths", kind))?;
            let pts = paths
                .get_ref()
                .iter()
                .map(|path| {
                    let dim = path.first().map_or(0, Vec::len);
                    path.iter()
                        .map(|c| {
                            if c.len() != dim || dim == 0 {
                                Err(cx.bad(paths, "family.paths", "inconsistent point dimensions"))
                            } else {
                                Point::new(c.clone()).map_err(|e| cx.bad(paths, "family.paths", e.to_string()))
                            }
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let body = ParametricBody::vertex_interpolation(bp.get_ref().clone(), pts)
                .map_err(|e| cx.bad(paths, "family.paths", e.to_string()))?;
            if let Some(d) = domain(false)? {
                if d != body.domain() {
                    return Err(cx.bad(
                        f.domain.as_ref().unwrap(),
                        "family.domain",
                        "must match the first and last breakpoints",
                    ));
                }
            }
            body
        }
        other => {
            return Err(cx.bad(
                &f.kind,
                "family.kind",
                format!("unknown family kind \"{other}\"; expected affine, rotation or vertex_interpolation"),
            ))
        }
    };
    Ok(match &f.lipschitz {
        None => body,
        Some(l) if *l.get_ref() >= 0.0 && l.get_ref().is_finite() => {
            body.with_lipschitz(*l.get_ref())
        }
        Some(l) => return Err(cx.bad(l, "family.lipschitz", "must be a finite number ≥ 0")),
    })
}
