//! Euclidean projection onto the convex hull of a finite point set.
//!
//! Wolfe's minimum-norm-point algorithm run on the shifted points `v_i - x`.
//! Each major step adds the vertex minimising `<y, v>`; the minor cycle keeps
//! the current corral affinely independent and its weights positive. The
//! algorithm terminates finitely in exact arithmetic; here it stops once the
//! optimality gap `|y|² - min_i <y, p_i>` drops below `OPT_TOL · max |p_i|²`.

use crate::linalg;

use super::point::dot;

/// Relative optimality threshold on the Wolfe gap.
pub const OPT_TOL: f64 = 1e-13;
/// Distances below this (relative to the point cloud radius) are reported as 0.
const ZERO_DIST: f64 = 1e-14;
const WEIGHT_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub(crate) struct MinNorm {
    /// Minimum-norm point of the hull of the shifted points.
    pub y: Vec<f64>,
    /// Corral: indices with positive barycentric weights.
    pub corral: Vec<(usize, f64)>,
    /// Final Wolfe gap `|y|² - min <y, p_i>`.
    pub gap: f64,
}

/// Minimum-norm point of `conv(points)`; `points` must be nonempty.
pub(crate) fn min_norm_point(points: &[Vec<f64>]) -> MinNorm {
    let dim = points[0].len();
    let norms: Vec<f64> = points.iter().map(|p| dot(p, p)).collect();
    let scale = norms
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let start = (0..points.len())
        .min_by(|&a, &b| norms[a].total_cmp(&norms[b]))
        .unwrap();

    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let combine = |corral: &[usize], w: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; dim];
        for (&i, &wi) in corral.iter().zip(w) {
            for (a, c) in y.iter_mut().zip(&points[i]) {
                *a += wi * c;
            }
        }
        y
    };

    let max_major = 50 * points.len() + 100;
    let mut y = combine(&corral, &weights);
    let mut gap = 0.0;
    for _ in 0..max_major {
        let yy = dot(&y, &y);
        if yy.sqrt() <= ZERO_DIST * scale.sqrt() {
            gap = 0.0;
            break;
        }
        let (j, best) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dot(&y, p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        gap = (yy - best).max(0.0);
        if gap <= OPT_TOL * scale || corral.contains(&j) {
            break;
        }
        corral.push(j);
        weights.push(0.0);

        let mut stalled = false;
        for _ in 0..=corral.len() + 1 {
            let Some(v) = affine_minimizer(points, &corral) else {
                corral.pop();
                weights.pop();
                stalled = true;
                break;
            };
            if v.iter().all(|&vi| vi > WEIGHT_TOL) {
                weights = v;
                break;
            }
            let mut theta = f64::INFINITY;
            let mut leaving = None;
            for (i, (&wi, &vi)) in weights.iter().zip(&v).enumerate() {
                if vi <= WEIGHT_TOL && wi - vi > 0.0 {
                    let th = wi / (wi - vi);
                    if th < theta {
                        theta = th;
                        leaving = Some(i);
                    }
                }
            }
            let theta = theta.min(1.0);
            for (wi, vi) in weights.iter_mut().zip(&v) {
                *wi = theta * vi + (1.0 - theta) * *wi;
            }
            let mut keep_c = Vec::with_capacity(corral.len());
            let mut keep_w = Vec::with_capacity(corral.len());
            for (i, (&c, &wi)) in corral.iter().zip(&weights).enumerate() {
                if Some(i) != leaving && wi > WEIGHT_TOL {
                    keep_c.push(c);
                    keep_w.push(wi);
                }
            }
            if keep_c.is_empty() {
                // Cannot happen in exact arithmetic; keep the entering point.
                keep_c.push(*corral.last().unwrap());
                keep_w.push(1.0);
            }
            let total: f64 = keep_w.iter().sum();
            corral = keep_c;
            weights = keep_w.into_iter().map(|w| w / total).collect();
        }
        y = combine(&corral, &weights);
        if stalled {
            break;
        }
    }
    if dot(&y, &y).sqrt() <= ZERO_DIST * scale.sqrt() {
        y = vec![0.0; dim];
        gap = 0.0;
    }
    MinNorm {
        y,
        corral: corral.into_iter().zip(weights).collect(),
        gap,
    }
}

/// Weights `v` (summing to 1) minimising `|Σ v_i p_i|` over the affine hull
/// of the corral; `None` if the corral is affinely dependent.
fn affine_minimizer(points: &[Vec<f64>], corral: &[usize]) -> Option<Vec<f64>> {
    if corral.len() == 1 {
        return Some(vec![1.0]);
    }
    let q0 = &points[corral[0]];
    let dim = q0.len();
    let k = corral.len() - 1;
    if k > dim {
        return None;
    }
    let a: Vec<Vec<f64>> = (0..dim)
        .map(|r| corral[1..].iter().map(|&i| points[i][r] - q0[r]).collect())
        .collect();
    let b: Vec<f64> = q0.iter().map(|c| -c).collect();
    let alpha = linalg::least_squares(&a, &b)?;
    let mut v = Vec::with_capacity(k + 1);
    v.push(1.0 - alpha.iter().sum::<f64>());
    v.extend(alpha);
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_projection_is_interior_point() {
        let pts = vec![vec![-1.0, 1.0], vec![1.0, 1.0]];
        let r = min_norm_point(&pts);
        assert!(r.y[0].abs() < 1e-15 && (r.y[1] - 1.0).abs() < 1e-15);
        assert_eq!(r.corral.len(), 2);
    }

    #[test]
    fn origin_inside_triangle_gives_zero() {
        let pts = vec![vec![-1.0, -1.0], vec![2.0, -1.0], vec![-1.0, 2.0]];
        let r = min_norm_point(&pts);
        assert_eq!(r.y, vec![0.0, 0.0]);
    }

    #[test]
    fn nearest_vertex_wins_when_cone_allows() {
        let pts = vec![vec![1.0, 1.0], vec![3.0, 1.0], vec![1.0, 3.0]];
        let r = min_norm_point(&pts);
        assert_eq!(r.y, vec![1.0, 1.0]);
        assert_eq!(r.corral, vec![(0, 1.0)]);
    }
}
