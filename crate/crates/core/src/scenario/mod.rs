//! Config-driven pipeline behind the `choquet` binary.
//!
//! Stages run in a fixed order and each writes one CSV file (two for
//! `select`) into the output directory; `summary.toml` records the resolved
//! configuration and a pass flag plus headline metrics per stage. Floats are
//! written with 17 significant digits and no timing information is recorded,
//! so identical inputs give byte-identical files.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::error::Error;
use crate::geometry::Point;
use crate::measures::{format_float as ff, truncation_bound, TestFunctionFamily};
use crate::parametric::{
    continuity_audit, lsc_ext_audit, track_extreme_point, uniform_grid, Family,
};
use crate::selection::{
    build_cover, continuous_selection, michael_epsilon_selection, verify_delta_selection,
    CoverWithWitnesses, DeltaConfig, PartitionOfUnity, Selection,
};

pub use config::{
    ConfigError, Scenario, DEFAULT_AUDIT_POINTS, DEFAULT_CONTINUITY_TOL, DEFAULT_DELTA,
    DEFAULT_EPS, DEFAULT_EXT_TOLERANCE, DEFAULT_GAMMA, DEFAULT_GRID_POINTS, DEFAULT_TRACK_POINTS,
    STAGES,
};

/// Slack on tracked-point distance bounds.
const TRACK_SLACK: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("stage {stage}: {source}")]
    Domain { stage: &'static str, source: Error },
}

impl RunError {
    /// Configuration and domain problems exit with 2.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub files: Vec<String>,
    pub metrics: Table,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub stages: Vec<StageOutcome>,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    /// 0 when every stage passed, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn stage(&self, name: &str) -> Option<&StageOutcome> {
        self.stages.iter().find(|s| s.name == name)
    }
}

fn coords(p: &Point) -> String {
    p.coords()
        .iter()
        .map(|&c| ff(c))
        .collect::<Vec<_>>()
        .join(",")
}

fn coord_header(prefix: &str, dim: usize) -> String {
    (1..=dim)
        .map(|i| format!("{prefix}{i}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn float_array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Float(x)).collect())
}

struct Writer<'a> {
    dir: &'a Path,
}

impl Writer<'_> {
    fn write(&self, name: &str, body: &str) -> Result<String, RunError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|source| RunError::Io { path, source })?;
        Ok(name.to_string())
    }
}

fn stage_err(stage: &'static str) -> impl Fn(Error) -> RunError {
    move |source| RunError::Domain { stage, source }
}

impl Scenario {
    /// Overrides the configured seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn delta_config(&self) -> DeltaConfig {
        DeltaConfig {
            gamma: self.gamma,
            delta: self.delta,
            n_terms: self.n_terms,
            ext_tolerance: self.ext_tolerance,
        }
    }

    /// Parameters `t_n` at which the extreme point is tracked: they approach
    /// `track_t0` like `1/n` from the side with room in the domain.
    pub fn track_times(&self) -> Vec<f64> {
        let (lo, hi) = self.body.domain();
        let t0 = self.track_t0;
        let span = if t0 < hi { hi - t0 } else { lo - t0 };
        (1..=self.track_points)
            .map(|n| t0 + span / n as f64)
            .collect()
    }

    /// Runs the configured stages, writing reports into `out_dir`.
    pub fn run(&self, out_dir: &Path) -> Result<RunSummary, RunError> {
        fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
            path: out_dir.to_path_buf(),
            source,
        })?;
        let w = Writer { dir: out_dir };
        let body = &self.body;
        let dim = body.dim();
        let (lo, hi) = body.domain();
        let grid = uniform_grid(lo, hi, self.grid_points);
        let audit = uniform_grid(lo, hi, self.audit_points);
        let selection =
            continuous_selection(body, self.x_ref.clone()).map_err(stage_err("select"))?;
        let mut cover: Option<(CoverWithWitnesses, PartitionOfUnity)> = None;
        let mut stages = Vec::new();

        for stage in STAGES
            .iter()
            .copied()
            .filter(|s| self.stages.iter().any(|x| x == s))
        {
            let mut metrics = Table::new();
            let mut files = Vec::new();
            let mut failure = None;
            let passed = match stage {
                "continuity_audit" => {
                    let rep = continuity_audit(body, &audit, self.continuity_tol)
                        .map_err(stage_err(stage))?;
                    let mut csv = String::from("t0,t1,hausdorff,modulus,pass\n");
                    for p in &rep.pairs {
                        let pass = p.pass.map_or("na", |b| if b { "true" } else { "false" });
                        writeln!(
                            csv,
                            "{},{},{},{},{pass}",
                            ff(p.t0),
                            ff(p.t1),
                            ff(p.hausdorff),
                            ff(p.modulus)
                        )
                        .unwrap();
                    }
                    files.push(w.write("continuity_audit.csv", &csv)?);
                    metrics.insert("max_modulus".into(), Value::Float(rep.max_modulus()));
                    rep.passed()
                }
                "lsc_ext_audit" => {
                    let rep = lsc_ext_audit(body, &audit, self.lsc_tol_slope)
                        .map_err(stage_err(stage))?;
                    let mut csv =
                        format!("t0,t1,max_distance,{},pass\n", coord_header("worst_x", dim));
                    for p in &rep.pairs {
                        writeln!(
                            csv,
                            "{},{},{},{},{}",
                            ff(p.t0),
                            ff(p.t1),
                            ff(p.max_distance),
                            coords(&p.worst_vertex),
                            p.pass
                        )
                        .unwrap();
                    }
                    files.push(w.write("lsc_ext_audit.csv", &csv)?);
                    metrics.insert("max_distance".into(), Value::Float(rep.max_distance()));
                    if let Some(i) = rep.first_failure() {
                        let p = &rep.pairs[i];
                        failure = Some(format!(
                            "extreme point {} of P({}) has no extreme point of P({}) within {}",
                            p.worst_vertex,
                            p.t0,
                            p.t1,
                            self.lsc_tol_slope * (p.t1 - p.t0)
                        ));
                        metrics.insert("first_failure_t0".into(), Value::Float(p.t0));
                        metrics.insert("first_failure_t1".into(), Value::Float(p.t1));
                    }
                    rep.passed()
                }
                "track" => {
                    let ts = self.track_times();
                    let tr = track_extreme_point(body, self.track_t0, &self.track_vertex, &ts)
                        .map_err(stage_err(stage))?;
                    let mut csv = format!(
                        "n,t,{},slice_depth,distance_to_start,bound,pass\n",
                        coord_header("a", dim)
                    );
                    let mut ok = true;
                    for (n, s) in tr.steps.iter().enumerate() {
                        let bound = self.lsc_tol_slope * (s.t - self.track_t0).abs() + TRACK_SLACK;
                        let pass = s.distance_to_start <= bound && s.slice_depth <= TRACK_SLACK;
                        ok &= pass;
                        writeln!(
                            csv,
                            "{},{},{},{},{},{},{pass}",
                            n + 1,
                            ff(s.t),
                            coords(&s.point),
                            ff(s.slice_depth),
                            ff(s.distance_to_start),
                            ff(bound)
                        )
                        .unwrap();
                    }
                    files.push(w.write("track.csv", &csv)?);
                    metrics.insert(
                        "exposing_direction".into(),
                        float_array(tr.exposure.direction.coords()),
                    );
                    metrics.insert("margin".into(), Value::Float(tr.exposure.margin));
                    ok
                }
                "select" => {
                    let sel = match michael_epsilon_selection(body, self.eps, &grid) {
                        Ok(s) => s,
                        Err(e @ Error::Refinement { .. }) => {
                            failure = Some(e.to_string());
                            stages.push(StageOutcome {
                                name: stage,
                                passed: false,
                                files,
                                metrics,
                                failure,
                            });
                            continue;
                        }
                        Err(e) => return Err(stage_err(stage)(e)),
                    };
                    let mut csv = String::from("t,distance,pass\n");
                    for &(t, d) in &sel.audit {
                        writeln!(csv, "{},{},{}", ff(t), ff(d), d < self.eps).unwrap();
                    }
                    files.push(w.write("select_epsilon.csv", &csv)?);
                    let pa = selection.audit(&audit).map_err(stage_err(stage))?;
                    let mut csv = format!(
                        "t,{},membership,reference_distance,step_to_next,hausdorff_to_next,step_bound,pass\n",
                        coord_header("p", dim)
                    );
                    for (i, p) in pa.points.iter().enumerate() {
                        let (step, h, bound, pass) = match pa.pairs.get(i) {
                            Some(q) => {
                                (ff(q.step), ff(q.hausdorff), ff(q.bound), q.pass.to_string())
                            }
                            None => (String::new(), String::new(), String::new(), String::new()),
                        };
                        writeln!(
                            csv,
                            "{},{},{},{},{step},{h},{bound},{pass}",
                            ff(p.t),
                            coords(&p.point),
                            ff(p.membership),
                            ff(p.reference_distance)
                        )
                        .unwrap();
                    }
                    files.push(w.write("select_projection.csv", &csv)?);
                    metrics.insert(
                        "breakpoints".into(),
                        Value::Integer(sel.breakpoints.len() as i64),
                    );
                    metrics.insert(
                        "max_epsilon_distance".into(),
                        Value::Float(sel.max_audit_distance()),
                    );
                    metrics.insert("max_membership".into(), Value::Float(pa.max_membership()));
                    sel.passed() && pa.passed()
                }
                "build_cover" => {
                    let fam = TestFunctionFamily::new(self.seed, dim, self.n_terms)
                        .map_err(stage_err(stage))?;
                    match build_cover(body, &selection, &self.delta_config(), &fam, &grid) {
                        Ok(c) => {
                            let mut csv =
                                String::from("alpha,center,radius,atoms,barycenter_gap\n");
                            for (i, ch) in c.charts().iter().enumerate() {
                                let target = selection.at(ch.center).map_err(stage_err(stage))?;
                                let gap = crate::measures::barycenter_gap(&ch.witness, &target)
                                    .map_err(stage_err(stage))?;
                                writeln!(
                                    csv,
                                    "{i},{},{},{},{}",
                                    ff(ch.center),
                                    ff(ch.radius),
                                    ch.witness.len(),
                                    ff(gap)
                                )
                                .unwrap();
                            }
                            files.push(w.write("build_cover.csv", &csv)?);
                            metrics.insert("charts".into(), Value::Integer(c.len() as i64));
                            metrics
                                .insert("doublings".into(), Value::Integer(c.doublings() as i64));
                            metrics.insert("min_radius".into(), Value::Float(c.min_radius()));
                            let pou = PartitionOfUnity::new(&c);
                            cover = Some((c, pou));
                            true
                        }
                        Err(e @ (Error::Coverage { .. } | Error::Refinement { .. })) => {
                            failure = Some(e.to_string());
                            false
                        }
                        Err(e) => return Err(stage_err(stage)(e)),
                    }
                }
                "verify_delta_selection" => match &cover {
                    None => {
                        failure = Some("no cover available".into());
                        false
                    }
                    Some((c, pou)) => {
                        let fam = TestFunctionFamily::new(self.seed, dim, self.n_terms)
                            .map_err(stage_err(stage))?;
                        let rep = verify_delta_selection(
                            body,
                            &selection,
                            c,
                            pou,
                            &self.delta_config(),
                            &fam,
                            &audit,
                        )
                        .map_err(stage_err(stage))?;
                        let mut csv = String::from(
                            "t,weights,distance,barycenter_gap,route,represents,supported,pass\n",
                        );
                        for r in &rep.rows {
                            let weights = r
                                .weights
                                .iter()
                                .map(|(i, e)| format!("{i}:{}", ff(*e)))
                                .collect::<Vec<_>>()
                                .join(" ");
                            writeln!(
                                csv,
                                "{},{weights},{},{},{},{},{},{}",
                                ff(r.t),
                                ff(r.distance),
                                ff(r.barycenter_gap),
                                r.route.as_str(),
                                r.represents,
                                r.supported,
                                r.pass
                            )
                            .unwrap();
                        }
                        files.push(w.write("verify_delta_selection.csv", &csv)?);
                        metrics.insert("max_distance".into(), Value::Float(rep.max_distance()));
                        metrics.insert(
                            "weak_star_modulus".into(),
                            Value::Float(rep.weak_star_modulus),
                        );
                        if let Some(r) = rep.rows.iter().find(|r| !r.pass) {
                            failure = Some(format!("witness check failed at t = {}", r.t));
                        }
                        rep.passed()
                    }
                },
                _ => unreachable!("stage names are validated"),
            };
            stages.push(StageOutcome {
                name: stage,
                passed,
                files,
                metrics,
                failure,
            });
        }
        let summary = RunSummary {
            out_dir: out_dir.to_path_buf(),
            stages,
        };
        w.write("summary.toml", &self.summary_record(&summary))?;
        Ok(summary)
    }

    /// Structured record of the resolved configuration and stage results.
    pub fn summary_record(&self, summary: &RunSummary) -> String {
        let b = &self.body;
        let mut root = Table::new();
        let mut sc = Table::new();
        sc.insert("name".into(), Value::String(self.name.clone()));
        sc.insert("seed".into(), Value::Integer(self.seed as i64));
        sc.insert(
            "stages".into(),
            Value::Array(
                self.stages
                    .iter()
                    .map(|s| Value::String(s.clone()))
                    .collect(),
            ),
        );
        sc.insert("passed".into(), Value::Boolean(summary.passed()));
        root.insert("scenario".into(), Value::Table(sc));

        let mut fam = Table::new();
        fam.insert("kind".into(), Value::String(b.family().kind().into()));
        fam.insert("dimension".into(), Value::Integer(b.dim() as i64));
        fam.insert("domain".into(), float_array(&[b.domain().0, b.domain().1]));
        fam.insert(
            "lipschitz".into(),
            b.lipschitz()
                .map_or(Value::String("none".into()), Value::Float),
        );
        if let Family::Rotation { rate, center, .. } = b.family() {
            fam.insert("rate".into(), Value::Float(*rate));
            fam.insert("center".into(), float_array(center.coords()));
        }
        root.insert("family".into(), Value::Table(fam));

        let mut p = Table::new();
        p.insert("gamma".into(), Value::Float(self.gamma));
        p.insert("delta".into(), Value::Float(self.delta));
        p.insert("eps".into(), Value::Float(self.eps));
        p.insert("n_terms".into(), Value::Integer(self.n_terms as i64));
        p.insert(
            "truncation_bound".into(),
            Value::Float(truncation_bound(self.n_terms)),
        );
        p.insert(
            "grid_points".into(),
            Value::Integer(self.grid_points as i64),
        );
        p.insert(
            "audit_points".into(),
            Value::Integer(self.audit_points as i64),
        );
        p.insert("x_ref".into(), float_array(self.x_ref.coords()));
        p.insert("ext_tolerance".into(), Value::Float(self.ext_tolerance));
        p.insert("continuity_tol".into(), Value::Float(self.continuity_tol));
        p.insert("lsc_tol_slope".into(), Value::Float(self.lsc_tol_slope));
        p.insert("track_t0".into(), Value::Float(self.track_t0));
        p.insert(
            "track_vertex".into(),
            float_array(self.track_vertex.coords()),
        );
        p.insert(
            "track_points".into(),
            Value::Integer(self.track_points as i64),
        );
        root.insert("parameters".into(), Value::Table(p));

        let mut st = Table::new();
        for s in &summary.stages {
            let mut t = s.metrics.clone();
            t.insert("passed".into(), Value::Boolean(s.passed));
            t.insert(
                "files".into(),
                Value::Array(s.files.iter().map(|f| Value::String(f.clone())).collect()),
            );
            if let Some(f) = &s.failure {
                t.insert("failure".into(), Value::String(f.clone()));
            }
            st.insert(s.name.into(), Value::Table(t));
        }
        root.insert("stages".into(), Value::Table(st));
        toml::to_string(&root).expect("plain tables serialize")
    }
}
