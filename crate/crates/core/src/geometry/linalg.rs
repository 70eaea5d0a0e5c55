//! Tiny dense linear algebra for circumcenters and predicates.

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
///
/// `a` is row-major `n x n`. Returns `None` when a pivot falls below
/// `tol` times the largest entry of `a`.
pub fn solve(a: &mut [f64], b: &mut [f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    for col in 0..n {
        let (piv, pval) = (col..n)
            .map(|r| (r, a[r * n + col].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pval <= tol * scale {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f != 0.0 {
                for k in col..n {
                    a[r * n + k] -= f * a[col * n + k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for k in r + 1..n {
            s -= a[r * n + k] * x[k];
        }
        x[r] = s / a[r * n + r];
    }
    Some(x)
}

/// Determinant of a row-major `n x n` matrix (consumed).
pub fn det(a: &mut [f64], n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {
            let mut sign = 1.0;
            for col in 0..n {
                let piv = (col..n)
                    .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                    .unwrap();
                if a[piv * n + col] == 0.0 {
                    return 0.0;
                }
                if piv != col {
                    for k in 0..n {
                        a.swap(piv * n + k, col * n + k);
                    }
                    sign = -sign;
                }
                let d = a[col * n + col];
                for r in col + 1..n {
                    let f = a[r * n + col] / d;
                    for k in col..n {
                        a[r * n + k] -= f * a[col * n + k];
                    }
                }
            }
            (0..n).fold(sign, |p, i| p * a[i * n + i])
        }
    }
}

/// Center of the smallest sphere through all `pts` whose center lies in
/// their affine hull. Returns `None` for affinely dependent input.
///
/// Edge vectors are normalized before solving, so the singularity test sees
/// only the angles between them: slivers with one very short edge keep
/// their true circumcenter.
pub fn circumcenter(pts: &[&[f64]]) -> Option<Vec<f64>> {
    circumcenter_tol(pts, 1e-13)
}

/// [`circumcenter`] with an explicit pivot tolerance on the normalized
/// system; `0.0` rejects only exactly dependent input.
pub fn circumcenter_tol(pts: &[&[f64]], tol: f64) -> Option<Vec<f64>> {
    let m = pts.len();
    assert!(m > 0);
    let p0 = pts[0];
    let dim = p0.len();
    match m {
        1 => return Some(p0.to_vec()),
        2 => return Some(p0.iter().zip(pts[1]).map(|(a, b)| 0.5 * (a + b)).collect()),
        _ => {}
    }
    let k = m - 1;
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let u: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let norms: Vec<f64> = u.iter().map(|v| dot(v, v).sqrt()).collect();
    if norms.iter().any(|&l| l == 0.0) {
        return None;
    }
    let w: Vec<Vec<f64>> = u.iter().zip(&norms).map(|(v, l)| v.iter().map(|x| x / l).collect()).collect();
    // With c = p0 + sum mu_i w_i: 2 sum_j mu_j <w_i, w_j> = |u_i|.
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            g[i * k + j] = 2.0 * dot(&w[i], &w[j]);
        }
    }
    let mut rhs = norms;
    let mu = solve(&mut g, &mut rhs, k, tol)?;
    let mut c = p0.to_vec();
    for (l, wi) in mu.iter().zip(&w) {
        for t in 0..dim {
            c[t] += l * wi[t];
        }
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_det() {
        let mut a = vec![2.0, 1.0, 1.0, 3.0];
        let mut b = vec![3.0, 5.0];
        let x = solve(&mut a, &mut b, 2, 1e-14).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
        let mut m = vec![
            1.0, 2.0, 0.0, 1.0, //
            0.0, 1.0, 3.0, 0.0, //
            2.0, 0.0, 1.0, 1.0, //
            1.0, 1.0, 1.0, 1.0,
        ];
        // numpy.linalg.det: 4.0
        assert!((det(&mut m, 4) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn circumcenter_right_triangle() {
        let c = circumcenter(&[&[0.0, 0.0], &[0.0, 1.0], &[2.0, 0.0]]).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12 && (c[1] - 0.5).abs() < 1e-12);
        assert!(circumcenter(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]]).is_none());
        assert!(circumcenter(&[&[0.0, 0.0], &[0.0, 0.0], &[2.0, 2.0]]).is_none());
    }

    #[test]
    fn sliver_with_short_edge() {
        // Three points on the unit circle, two of them 5e-7 apart.
        let on = |t: f64| [t.cos(), t.sin()];
        let (a, b, c) = (on(-1.5), on(-1.5 + 5e-7), on(-1.514));
        let cc = circumcenter(&[&a, &b, &c]).unwrap();
        assert!(cc.iter().all(|x| x.abs() < 1e-6), "{cc:?}");
        let r = (cc[0] - a[0]).hypot(cc[1] - a[1]);
        assert!((r - 1.0).abs() < 1e-6);
    }
}
