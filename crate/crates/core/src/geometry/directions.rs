//! Deterministic quasi-uniform unit directions.
//!
//! The sequence starts with the signed coordinate axes `e_1, -e_1, e_2, ...`
//! and continues with a low-discrepancy part: golden-angle points on the
//! circle for `d = 2`, and for `d ≥ 3` an additive recurrence in the unit cube
//! pushed to the sphere through the Box-Muller map. Every prefix of the
//! sequence is itself a valid direction set, so sampled suprema over the first
//! `n` directions are nondecreasing in `n`. The seed offsets the
//! low-discrepancy index; the output is bit-for-bit reproducible.

use std::f64::consts::TAU;

use super::point::Direction;

pub const DEFAULT_SEED: u64 = 0;

/// The first `n` directions of the sequence in dimension `dim`.
pub fn sphere_directions(dim: usize, n: usize, seed: u64) -> Vec<Direction> {
    let gen = DirectionSequence::new(dim, seed);
    (0..n).map(|k| gen.nth(k)).collect()
}

#[derive(Debug, Clone)]
pub struct DirectionSequence {
    dim: usize,
    seed: u64,
    alphas: Vec<f64>,
}

impl DirectionSequence {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "directions need dimension ≥ 1");
        let alphas = if dim >= 3 {
            let n_unif = 2 * dim.div_ceil(2);
            let phi = generalized_golden_ratio(n_unif);
            (1..=n_unif)
                .map(|i| (1.0 / phi.powi(i as i32)).fract())
                .collect()
        } else {
            Vec::new()
        };
        Self { dim, seed, alphas }
    }

    pub fn nth(&self, k: usize) -> Direction {
        let d = self.dim;
        if k < 2 * d || d == 1 {
            let k = k % (2 * d);
            let mut v = vec![0.0; d];
            v[k / 2] = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            return Direction::new(v).expect("axis");
        }
        let q = (k - 2 * d + 1) as f64 + self.seed as f64;
        if d == 2 {
            let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
            let theta = TAU * (q * golden).fract();
            return Direction::new(vec![theta.cos(), theta.sin()]).expect("unit circle");
        }
        let u: Vec<f64> = self.alphas.iter().map(|a| (0.5 + q * a).fract()).collect();
        let mut z = Vec::with_capacity(u.len());
        for pair in u.chunks(2) {
            let r = (-2.0 * (1.0 - pair[0]).ln()).sqrt();
            let ang = TAU * pair[1];
            z.push(r * ang.cos());
            z.push(r * ang.sin());
        }
        z.truncate(d);
        Direction::new(z).unwrap_or_else(|_| Direction::axis(d, 0))
    }
}

/// Positive root of `x^(n+1) = x + 1`.
fn generalized_golden_ratio(n: usize) -> f64 {
    let p = (n + 1) as i32;
    let mut x = 2.0_f64;
    for _ in 0..100 {
        let f = x.powi(p) - x - 1.0;
        let df = p as f64 * x.powi(p - 1) - 1.0;
        let next = x - f / df;
        if (next - x).abs() < 1e-16 {
            break;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point::norm;

    #[test]
    fn starts_with_coordinate_axes() {
        let dirs = sphere_directions(2, 4, DEFAULT_SEED);
        assert_eq!(dirs[0].coords(), &[1.0, 0.0]);
        assert_eq!(dirs[1].coords(), &[-1.0, 0.0]);
        assert_eq!(dirs[2].coords(), &[0.0, 1.0]);
    }

    #[test]
    fn unit_norm_and_reproducible() {
        for d in 1..=6 {
            let a = sphere_directions(d, 500, 3);
            let b = sphere_directions(d, 500, 3);
            assert_eq!(a, b);
            for f in &a {
                assert!((norm(f.coords()) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn plastic_number() {
        assert!((generalized_golden_ratio(2) - 1.324_717_957_244_746).abs() < 1e-12);
        assert!((generalized_golden_ratio(1) - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn circle_covering_is_fine() {
        // Max angular gap among 10^4 directions.
        let mut angles: Vec<f64> = sphere_directions(2, 10_000, 0)
            .iter()
            .map(|f| f.coords()[1].atan2(f.coords()[0]))
            .collect();
        angles.sort_by(f64::total_cmp);
        let mut gap = angles[0] + TAU - angles[angles.len() - 1];
        for w in angles.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        assert!(gap < 2e-3, "gap {gap}");
    }
}
