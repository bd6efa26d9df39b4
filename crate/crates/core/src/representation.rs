//! Measures supported on extreme points: exact Carathéodory representations
//! and the atom-transport step that moves a discrete measure onto the
//! extreme points of a nearby body.

use crate::error::{check_dim, Error, Result};
use crate::geometry::{norm, Point, Polytope};
use crate::linalg;
use crate::lp::{LinearProgram, Relation};
use crate::measures::{
    barycenter_gap, in_l, DiscreteMeasure, RepresentingMeasureConstraint, NEGLIGIBLE_WEIGHT,
    TARGET_TOL,
};

/// Bisection tolerance on the blend weight in [`repair_witness`].
pub const BLEND_TOL: f64 = 1e-9;

/// A measure on the vertices of `body` with at most `d + 1` atoms whose
/// barycenter is `x` (within 1e-9).
///
/// The membership LP over all vertices yields a basic solution; any excess
/// atoms are then stripped by moving along an affine dependence until an atom
/// leaves (lowest index first). Weights are finally re-solved on the surviving
/// atoms by least squares when that improves the reconstruction.
pub fn caratheodory_measure(body: &Polytope, x: &Point) -> Result<DiscreteMeasure> {
    check_dim(body.dim(), x.dim())?;
    let body = body.reduce();
    let verts = body.vertices();
    let proj = body.nearest_point(x)?;
    if proj.distance > TARGET_TOL {
        let dir = x.sub(&proj.point);
        let n = norm(&dir);
        return Err(Error::OutsideBody {
            distance: proj.distance,
            direction: dir.into_iter().map(|c| c / n).collect(),
        });
    }
    let target = if proj.distance > 0.0 {
        proj.point.clone()
    } else {
        x.clone()
    };
    let d = target.dim();

    let mut lp = LinearProgram::new(verts.len());
    for k in 0..d {
        lp.add_row(
            verts.iter().map(|v| v.coords()[k]).collect(),
            Relation::Eq,
            target.coords()[k],
        );
    }
    lp.add_row(vec![1.0; verts.len()], Relation::Eq, 1.0);
    let mut weights: Vec<f64> = match lp.solve().point() {
        Some(w) => w.to_vec(),
        None => {
            let mut w = vec![0.0; verts.len()];
            for &(i, wi) in &proj.weights {
                w[i] = wi;
            }
            w
        }
    };

    let mut support: Vec<usize> = (0..verts.len())
        .filter(|&i| weights[i] > NEGLIGIBLE_WEIGHT)
        .collect();
    while support.len() > d + 1 {
        let cols: Vec<Vec<f64>> = (0..=d)
            .map(|r| {
                support
                    .iter()
                    .map(|&i| if r < d { verts[i].coords()[r] } else { 1.0 })
                    .collect()
            })
            .collect();
        let Some(mut dep) = linalg::null_vector(&cols) else {
            break;
        };
        if !dep.iter().any(|&v| v > 0.0) {
            dep.iter_mut().for_each(|v| *v = -*v);
        }
        let mut step = f64::INFINITY;
        let mut leaving = 0;
        for (k, (&i, &m)) in support.iter().zip(&dep).enumerate() {
            if m > 1e-14 {
                let r = weights[i] / m;
                if r < step - 1e-15 {
                    step = r;
                    leaving = k;
                }
            }
        }
        for (&i, &m) in support.iter().zip(&dep) {
            weights[i] = (weights[i] - step * m).max(0.0);
        }
        weights[support[leaving]] = 0.0;
        support.retain(|&i| weights[i] > NEGLIGIBLE_WEIGHT);
    }

    let residual = |w: &[f64]| -> f64 {
        let b = Point::weighted_sum(support.iter().map(|&i| (w[i], &verts[i]))).unwrap();
        b.distance(&target) + (support.iter().map(|&i| w[i]).sum::<f64>() - 1.0).abs()
    };
    let rows: Vec<Vec<f64>> = (0..=d)
        .map(|r| {
            support
                .iter()
                .map(|&i| if r < d { verts[i].coords()[r] } else { 1.0 })
                .collect()
        })
        .collect();
    let mut rhs = target.coords().to_vec();
    rhs.push(1.0);
    if let Some(refined) = linalg::least_squares(&rows, &rhs) {
        if refined.iter().all(|&v| v >= 0.0) {
            let mut cand = weights.clone();
            for (&i, v) in support.iter().zip(refined) {
                cand[i] = v;
            }
            if residual(&cand) < residual(&weights) {
                weights = cand;
            }
        }
    }

    let total: f64 = support.iter().map(|&i| weights[i]).sum();
    let atoms: Vec<Point> = support.iter().map(|&i| verts[i].clone()).collect();
    let w: Vec<f64> = support.iter().map(|&i| weights[i] / total).collect();
    Ok(DiscreteMeasure::from_parts_unchecked(atoms, w))
}

/// A member of `L` for the constraint: its exact Carathéodory representation.
pub fn choquet_witness(c: &RepresentingMeasureConstraint) -> Result<DiscreteMeasure> {
    caratheodory_measure(c.body(), c.target())
}

/// Replaces every atom by its nearest vertex of `body` (weights untouched).
/// Returns the transported measure and the largest snap distance.
pub fn transport_to_extremes(
    mu: &DiscreteMeasure,
    body: &Polytope,
) -> Result<(DiscreteMeasure, f64)> {
    check_dim(body.dim(), mu.dim())?;
    let mut snap = 0.0_f64;
    let atoms = mu
        .atoms()
        .iter()
        .map(|a| {
            let (i, dist) = body.nearest_vertex(a);
            snap = snap.max(dist);
            body.vertices()[i].clone()
        })
        .collect();
    Ok((
        DiscreteMeasure::from_parts_unchecked(atoms, mu.weights().to_vec()),
        snap,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Repair {
    pub measure: DiscreteMeasure,
    /// Weight `s` of the exact witness in `(1 - s)·transported + s·witness`.
    pub blend_weight: f64,
    /// Largest transport distance (0 when the input was returned unchanged).
    pub snap_distance: f64,
}

/// Moves `mu` into `L`: input already in `L` is returned as is; otherwise its
/// atoms are transported onto the extreme points and, if the barycenter gap
/// is still too large, blended with the exact witness using the smallest
/// weight (found by bisection) that restores γ-representation.
pub fn repair_witness(mu: &DiscreteMeasure, c: &RepresentingMeasureConstraint) -> Result<Repair> {
    check_dim(c.body().dim(), mu.dim())?;
    if in_l(mu, c) {
        return Ok(Repair {
            measure: mu.clone(),
            blend_weight: 0.0,
            snap_distance: 0.0,
        });
    }
    let (moved, snap) = transport_to_extremes(mu, c.body())?;
    if barycenter_gap(&moved, c.target())? < c.gamma() {
        return Ok(Repair {
            measure: moved,
            blend_weight: 0.0,
            snap_distance: snap,
        });
    }
    let witness = choquet_witness(c)?;
    let blend = |s: f64| DiscreteMeasure::mixture([(1.0 - s, &moved), (s, &witness)]);
    let ok = |m: &DiscreteMeasure| barycenter_gap(m, c.target()).is_ok_and(|g| g < c.gamma());
    let mut measure = blend(1.0)?;
    if !ok(&measure) {
        return Err(Error::Domain(format!(
            "exact witness misses the target by more than gamma = {}",
            c.gamma()
        )));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > BLEND_TOL {
        let mid = 0.5 * (lo + hi);
        let m = blend(mid)?;
        if ok(&m) {
            hi = mid;
            measure = m;
        } else {
            lo = mid;
        }
    }
    Ok(Repair {
        measure,
        blend_weight: hi,
        snap_distance: snap,
    })
}
