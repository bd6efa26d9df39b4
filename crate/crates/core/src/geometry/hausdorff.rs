use crate::error::{check_dim, invalid, Result};

use super::directions::{DirectionSequence, DEFAULT_SEED};
use super::polytope::Polytope;

/// One-sided distance `h*(A, B) = max_{a ∈ A} d(a, B)`.
///
/// `d(·, B)` is convex, so the maximum over `conv(A)` sits at a vertex of `A`.
pub fn directed_hausdorff(a: &Polytope, b: &Polytope) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    let mut worst = 0.0_f64;
    for v in a.vertices() {
        worst = worst.max(b.distance(v)?);
    }
    Ok(worst)
}

/// Hausdorff distance `max(h*(A, B), h*(B, A))`.
pub fn hausdorff(a: &Polytope, b: &Polytope) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// `max |c(f, A) - c(f, B)|` over the first `n_dirs` directions of the
/// deterministic sphere sequence. Always a lower bound for `hausdorff(A, B)`.
pub fn support_gap_sampled(a: &Polytope, b: &Polytope, n_dirs: usize) -> Result<f64> {
    support_gap_sampled_seeded(a, b, n_dirs, DEFAULT_SEED)
}

pub fn support_gap_sampled_seeded(
    a: &Polytope,
    b: &Polytope,
    n_dirs: usize,
    seed: u64,
) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    if n_dirs == 0 {
        return Err(invalid("support_gap_sampled needs at least one direction"));
    }
    let seq = DirectionSequence::new(a.dim(), seed);
    let mut gap = 0.0_f64;
    for k in 0..n_dirs {
        let f = seq.nth(k);
        gap = gap.max((a.support(&f)? - b.support(&f)?).abs());
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn box_poly(r: f64) -> Polytope {
        Polytope::from_points(vec![
            [r, r].into(),
            [-r, r].into(),
            [-r, -r].into(),
            [r, -r].into(),
        ])
        .unwrap()
    }

    #[test]
    fn self_distance_is_zero() {
        let a = box_poly(1.0);
        assert_eq!(directed_hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(support_gap_sampled(&a, &a, 100).unwrap(), 0.0);
    }

    #[test]
    fn translate_by_half() {
        let a = box_poly(1.0);
        let b = a.translate(&[0.5, 0.0]).unwrap();
        assert!((directed_hausdorff(&a, &b).unwrap() - 0.5).abs() < 1e-12);
        assert!((hausdorff(&a, &b).unwrap() - 0.5).abs() < 1e-12);
        let sampled = support_gap_sampled(&a, &b, 10_000).unwrap();
        assert!((0.499..=0.5).contains(&sampled), "{sampled}");
        assert_eq!(support_gap_sampled(&a, &b, 1).unwrap(), 0.5);
    }

    #[test]
    fn nested_boxes() {
        let small = box_poly(1.0);
        let big = box_poly(2.0);
        assert_eq!(directed_hausdorff(&small, &big).unwrap(), 0.0);
        assert!((directed_hausdorff(&big, &small).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((hausdorff(&small, &big).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dimension_and_count_errors() {
        let a = box_poly(1.0);
        let c = Polytope::from_points(vec![Point::from([0.0, 0.0, 0.0])]).unwrap();
        assert!(hausdorff(&a, &c).is_err());
        assert!(support_gap_sampled(&a, &a, 0).is_err());
    }
}
