//! Tiny dense linear-algebra helpers shared by the LP kernel, the projection
//! routine and the Carathéodory reduction. Matrices are row-major `Vec<Vec<f64>>`.

#![allow(clippy::needless_range_loop)]

const SINGULAR_TOL: f64 = 1e-13;

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below the singularity threshold
/// relative to the largest entry of `a`.
pub(crate) fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= SINGULAR_TOL * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Least-squares solution of `a x ≈ b` (`a` is m×n with m ≥ n) through
/// Householder QR. Returns `None` if `a` is numerically rank deficient.
pub(crate) fn least_squares(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if n == 0 {
        return Some(Vec::new());
    }
    if m < n {
        return None;
    }
    let mut r: Vec<Vec<f64>> = a.to_vec();
    let mut y = b.to_vec();
    let scale = r
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for k in 0..n {
        let norm = (k..m).map(|i| r[i][k] * r[i][k]).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale {
            return None;
        }
        let alpha = if r[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let dot: f64 = (k..m).map(|i| v[i - k] * r[i][j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                r[i][j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * y[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            y[i] -= f * v[i - k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| r[k][j] * x[j]).sum();
        x[k] = (y[k] - s) / r[k][k];
    }
    Some(x)
}

/// A nonzero vector in the null space of the m×n matrix `a`, if the columns
/// are linearly dependent (always the case when n > m).
pub(crate) fn null_vector(a: &[Vec<f64>]) -> Option<Vec<f64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut r: Vec<Vec<f64>> = a.to_vec();
    let scale = r
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let tol = 1e-11 * scale;
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    let mut free_col = None;
    for col in 0..n {
        if row == m {
            free_col = free_col.or(Some(col));
            break;
        }
        let piv = (row..m)
            .max_by(|&i, &j| r[i][col].abs().total_cmp(&r[j][col].abs()))
            .unwrap();
        if r[piv][col].abs() <= tol {
            free_col = free_col.or(Some(col));
            continue;
        }
        r.swap(row, piv);
        let p = r[row][col];
        for v in r[row].iter_mut() {
            *v /= p;
        }
        for i in 0..m {
            if i != row && r[i][col] != 0.0 {
                let f = r[i][col];
                for k in 0..n {
                    r[i][k] -= f * r[row][k];
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free = free_col?;
    let mut x = vec![0.0; n];
    x[free] = 1.0;
    for (i, &pc) in pivot_cols.iter().enumerate() {
        if pc < free {
            x[pc] = -r[i][free];
        }
    }
    Some(x)
}
