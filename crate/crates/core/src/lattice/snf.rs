//! Smith normal form over the integers.

/// `left * a * right = diag(invariants)` with `left`, `right` unimodular and
/// each invariant factor dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariants: Vec<i64>,
    pub left: Vec<Vec<i64>>,
    pub right: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn narrow(m: Vec<Vec<i128>>) -> Vec<Vec<i64>> {
    m.into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("Smith form entry overflows i64")).collect())
        .collect()
}

/// Smith normal form of a square integer matrix.
pub fn smith_normal_form(a: &[Vec<i64>]) -> SmithForm {
    let n = a.len();
    let mut s: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut u = identity(n);
    let mut v = identity(n);

    for t in 0..n {
        loop {
            // smallest nonzero pivot in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if s[i][j] != 0 && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            s.swap(t, pi);
            u.swap(t, pi);
            for row in s.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..n {
                let q = s[i][t] / s[t][t];
                if q != 0 {
                    for j in 0..n {
                        s[i][j] -= q * s[t][j];
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= s[i][t] == 0;
            }
            for j in t + 1..n {
                let q = s[t][j] / s[t][t];
                if q != 0 {
                    for i in 0..n {
                        s[i][j] -= q * s[i][t];
                        v[i][j] -= q * v[i][t];
                    }
                }
                clean &= s[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad_row = (t + 1..n).find(|&i| (t + 1..n).any(|j| s[i][j] % s[t][t] != 0));
            match bad_row {
                Some(i) => {
                    for j in 0..n {
                        s[t][j] += s[i][j];
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if s[t][t] < 0 {
            for j in 0..n {
                s[t][j] = -s[t][j];
                u[t][j] = -u[t][j];
            }
        }
    }

    let invariants = (0..n).map(|i| i64::try_from(s[i][i]).expect("invariant factor overflows i64")).collect();
    SmithForm { invariants, left: narrow(u), right: narrow(v) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    fn check(a: Vec<Vec<i64>>, expected: &[i64]) {
        let snf = smith_normal_form(&a);
        assert_eq!(snf.invariants, expected);
        let d = mul(&mul(&snf.left, &a), &snf.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { expected[i] } else { 0 }, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn diagonal_and_mixed() {
        check(vec![vec![3]], &[3]);
        check(vec![vec![-4]], &[4]);
        check(vec![vec![2, 0], vec![0, 2]], &[2, 2]);
        check(vec![vec![2, 0], vec![0, 3]], &[1, 6]);
        check(vec![vec![2, 1], vec![0, 2]], &[1, 4]);
        check(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], &[2, 6, 12]);
    }

    #[test]
    fn singular_matrix() {
        let snf = smith_normal_form(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(snf.invariants, vec![1, 0]);
    }
}
