//! Executable finite-dimensional versions of the constructions behind the
//! continuous Choquet theorem.
//!
//! The crate is organised bottom-up:
//!
//! * [`lp`] is a small dense two-phase simplex kernel used for membership and
//!   redundancy certificates.
//! * [`geometry`] holds points, directions and V-polytopes together with
//!   support functions, slices, metric projection and Hausdorff distances.
//! * [`measures`] covers finitely supported probability measures, barycenters,
//!   the γ-representation test and a weak* metric built from a fixed family of
//!   test functions.
//! * [`representation`] builds measures supported on extreme points
//!   (Carathéodory witnesses) and transports atoms between bodies.
//! * [`parametric`] defines parameter-dependent polytopes `t ↦ P(t)`, their
//!   continuity audits and slice-based extreme-point tracking.
//! * [`selection`] contains point selections of `P` and the partition-of-unity
//!   construction of a weak*-continuous family of representing measures.
//! * [`scenario`] drives all of the above from a config file and writes CSV
//!   reports; it backs the `choquet` binary.
//!
//! ```
//! use choquet::geometry::Point;
//! use choquet::measures::TestFunctionFamily;
//! use choquet::parametric::{uniform_grid, ParametricBody};
//! use choquet::selection::{
//!     build_cover, continuous_selection, verify_delta_selection, DeltaConfig, PartitionOfUnity,
//! };
//! use choquet::Polytope;
//!
//! fn main() -> choquet::Result<()> {
//!     let square = Polytope::from_points(vec![
//!         [0.0, 0.0].into(),
//!         [1.0, 0.0].into(),
//!         [1.0, 1.0].into(),
//!         [0.0, 1.0].into(),
//!     ])?;
//!     let quarter_turn = std::f64::consts::FRAC_PI_2;
//!     let body = ParametricBody::rotation(square, quarter_turn, Point::origin(2), (0.0, 1.0))?;
//!     let p = continuous_selection(&body, [0.5, 0.5].into())?;
//!     let cfg = DeltaConfig::new(0.1, 0.05);
//!     let fam = TestFunctionFamily::new(0, 2, cfg.n_terms)?;
//!     let cover = build_cover(&body, &p, &cfg, &fam, &uniform_grid(0.0, 1.0, 11))?;
//!     let pou = PartitionOfUnity::new(&cover);
//!     let audit = uniform_grid(0.0, 1.0, 1001);
//!     let report = verify_delta_selection(&body, &p, &cover, &pou, &cfg, &fam, &audit)?;
//!     assert!(report.passed());
//!     println!("max witness distance {:.3e}", report.max_distance());
//!     Ok(())
//! }
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
mod linalg;
pub mod lp;
pub mod measures;
pub mod parametric;
pub mod representation;
pub mod scenario;
pub mod selection;

pub use error::{Error, Result};
pub use geometry::{Direction, Point, Polytope};
pub use measures::{DiscreteMeasure, RepresentingMeasureConstraint, TestFunctionFamily};
pub use parametric::ParametricBody;
