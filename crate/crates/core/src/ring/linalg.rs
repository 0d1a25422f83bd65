//! Small complex linear algebra helpers on row-major `Vec<Vec<_>>` data.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) fn to_matrix(rows: &[Vec<Complex64>], ncols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Vectors `r` with `r^T W ~ 0`, from the SVD of `W^T` (padded with zero
/// rows so that all right singular vectors are available). Returns the
/// singular values in decreasing order and the vectors whose singular value
/// is below `rel_tol * sigma_max`.
pub(crate) fn left_nullspace(w: &DMatrix<Complex64>, rel_tol: f64) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let (m, n) = w.shape();
    if m == 0 {
        return (Vec::new(), Vec::new());
    }
    let rows = m.max(n);
    let wt = DMatrix::from_fn(rows, m, |i, j| if i < n { w[(j, i)] } else { Complex64::new(0.0, 0.0) });
    let svd = wt.svd(false, true);
    let vt = svd.v_t.expect("requested V^H");
    let sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let null = order
        .iter()
        .filter(|&&j| sigma[j] <= rel_tol * smax || smax == 0.0)
        .map(|&j| (0..m).map(|i| vt[(j, i)].conj()).collect())
        .collect();
    (order.iter().map(|&j| sigma[j]).collect(), null)
}

/// Reduced row echelon form with partial pivoting; entries below
/// `clean * (row max)` are set to zero afterwards.
pub(crate) fn rref(mut rows: Vec<Vec<Complex64>>, clean: f64) -> Vec<Vec<Complex64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let scale = rows.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == nrows {
            break;
        }
        let (best, best_abs) = (pivot_row..nrows)
            .map(|r| (r, rows[r][col].norm()))
            .fold((pivot_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_abs <= 1e-10 * scale {
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        for z in rows[pivot_row].iter_mut() {
            *z /= p;
        }
        for r in 0..nrows {
            if r != pivot_row {
                let f = rows[r][col];
                if f != Complex64::new(0.0, 0.0) {
                    for c in 0..ncols {
                        let delta = f * rows[pivot_row][c];
                        rows[r][c] -= delta;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    for row in rows.iter_mut() {
        let rmax = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for z in row.iter_mut() {
            if z.norm() < clean * rmax {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    }
    rows
}

/// Divides a row by its largest-modulus entry (the first one on ties).
pub(crate) fn normalize_by_largest(row: &mut [Complex64]) {
    let mut best = Complex64::new(0.0, 0.0);
    for z in row.iter() {
        if z.norm() > best.norm() {
            best = *z;
        }
    }
    if best != Complex64::new(0.0, 0.0) {
        for z in row.iter_mut() {
            *z /= best;
        }
    }
}

/// Largest relative distance of a row of `candidates` from the row space of
/// `basis` (orthogonal projection via SVD).
pub(crate) fn row_space_distance(basis: &[Vec<Complex64>], candidates: &[Vec<Complex64>]) -> f64 {
    let Some(ncols) = candidates.first().map(Vec::len) else {
        return 0.0;
    };
    if basis.is_empty() {
        return if candidates.iter().flatten().any(|z| z.norm() > 0.0) { 1.0 } else { 0.0 };
    }
    let b = to_matrix(basis, ncols);
    let svd = b.svd(false, true);
    let vt = svd.v_t.expect("requested V^H");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&j| svd.singular_values[j] > 1e-12 * smax).collect();
    candidates
        .iter()
        .map(|c| {
            let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let mut resid = c.clone();
            for &j in &keep {
                let coef: Complex64 = (0..ncols).map(|i| c[i] * vt[(j, i)].conj()).sum();
                for i in 0..ncols {
                    resid[i] -= coef * vt[(j, i)];
                }
            }
            resid.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / norm
        })
        .fold(0.0, f64::max)
}

/// Numerical rank with threshold `rel_tol * sigma_max`.
pub(crate) fn rank(rows: &[Vec<Complex64>], rel_tol: f64) -> usize {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let s = singular_values(&to_matrix(rows, ncols));
    let smax = s.first().cloned().unwrap_or(0.0);
    s.iter().filter(|x| **x > rel_tol * smax).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn nullspace_of_tall_matrix() {
        // rows 0 and 2 are equal, row 3 = row 0 + row 1
        let rows = vec![vec![c(1.0), c(2.0)], vec![c(0.0), c(1.0)], vec![c(1.0), c(2.0)], vec![c(1.0), c(3.0)]];
        let w = to_matrix(&rows, 2);
        let (_, null) = left_nullspace(&w, 1e-10);
        assert_eq!(null.len(), 2);
        for r in &null {
            for col in 0..2 {
                let s: Complex64 = (0..4).map(|i| r[i] * w[(i, col)]).sum();
                assert!(s.norm() < 1e-12);
            }
        }
        let reduced = rref(null, 1e-12);
        assert_eq!(reduced.len(), 2);
        assert_eq!(reduced[0][0], c(1.0));
    }

    #[test]
    fn row_space_membership() {
        let basis = vec![vec![c(1.0), c(0.0), c(1.0)], vec![c(0.0), c(1.0), c(0.0)]];
        assert!(row_space_distance(&basis, &[vec![c(2.0), c(3.0), c(2.0)]]) < 1e-14);
        assert!(row_space_distance(&basis, &[vec![c(0.0), c(0.0), c(1.0)]]) > 0.5);
        assert_eq!(rank(&basis, 1e-12), 2);
    }
}
