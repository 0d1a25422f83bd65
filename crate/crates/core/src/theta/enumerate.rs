use nalgebra::DMatrix;

/// Calls `visit` with every integer vector `lambda` such that
/// `(lambda - center)^T Y (lambda - center) <= radius^2`, where `Y = R^T R`
/// and `upper` is the Cholesky factor `R`.
///
/// Coordinates are fixed from the last one down (Fincke-Pohst), so each
/// partial vector is pruned as soon as its partial norm leaves the ellipsoid.
pub(crate) fn for_each_in_ellipsoid(upper: &DMatrix<f64>, center: &[f64], radius: f64, mut visit: impl FnMut(&[i64])) {
    let n = center.len();
    let mut lambda = vec![0i64; n];
    let mut y = vec![0.0; n];
    recurse(upper, center, radius * radius, n, 0.0, &mut lambda, &mut y, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    upper: &DMatrix<f64>,
    center: &[f64],
    r2: f64,
    level: usize,
    partial: f64,
    lambda: &mut [i64],
    y: &mut [f64],
    visit: &mut impl FnMut(&[i64]),
) {
    if level == 0 {
        visit(lambda);
        return;
    }
    let i = level - 1;
    let n = center.len();
    let rii = upper[(i, i)];
    let t: f64 = (i + 1..n).map(|j| upper[(i, j)] * y[j]).sum();
    let slack = r2 - partial;
    if slack < 0.0 {
        return;
    }
    let half = slack.sqrt() / rii;
    let mid = -t / rii + center[i];
    let lo = (mid - half).ceil() as i64;
    let hi = (mid + half).floor() as i64;
    for l in lo..=hi {
        lambda[i] = l;
        y[i] = l as f64 - center[i];
        let row = rii * y[i] + t;
        let next = partial + row * row;
        if next <= r2 {
            recurse(upper, center, r2, i, next, lambda, y, visit);
        }
    }
}
