//! Compact convex polytopes in V-representation: support functions, extreme
//! points, slices, metric projection and Hausdorff distances.
//!
//! Linear functionals are identified with vectors through the Euclidean inner
//! product, so the dual unit ball is the Euclidean unit ball.

pub mod directions;
mod hausdorff;
mod point;
mod polytope;
pub(crate) mod projection;

pub use directions::{sphere_directions, DirectionSequence};
pub use hausdorff::{
    directed_hausdorff, hausdorff, support_gap_sampled, support_gap_sampled_seeded,
};
pub(crate) use point::{dot, norm};
pub use point::{Direction, Point};
pub use polytope::{
    extreme_points, sorted_vertices, Polytope, Projection, DUPLICATE_TOL, SLICE_TOL,
};
