//! Alpha values of Delaunay simplices.
//!
//! Circumballs come from an equilibrated floating-point solve; when the
//! normalized Gram matrix is close to singular (nearly cospherical and
//! coplanar vertices) they are recomputed in exact rational arithmetic. The
//! attachment test falls back to exact arithmetic near the sphere.

use crate::geometry::{distance, support_ball, PointCloud};
use crate::simplex::Simplex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// Below this normalized Gram determinant the floating-point circumcenter
/// may have lost more than half of its digits.
const ILL_CONDITIONED: f64 = 1e-8;
/// Relative band around the sphere where the attachment test is exact.
const NEAR_SPHERE: f64 = 1e-9;

struct Circumball {
    center: Vec<f64>,
    radius: f64,
    exact: Option<ExactBall>,
}

#[derive(Clone)]
struct ExactBall {
    center: Vec<BigRational>,
    radius2: BigRational,
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn dot<T: Copy + std::ops::Mul<Output = T> + std::iter::Sum>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

/// Exact smallest circumsphere: center `p0 + sum l_i u_i` with
/// `2 sum_j l_j <u_i, u_j> = <u_i, u_i>`. `None` for dependent input.
fn exact_ball(pts: &[&[f64]]) -> Option<ExactBall> {
    let p: Vec<Vec<BigRational>> = pts.iter().map(|q| q.iter().map(|&x| rat(x)).collect()).collect();
    let k = p.len() - 1;
    let u: Vec<Vec<BigRational>> = p[1..]
        .iter()
        .map(|q| q.iter().zip(&p[0]).map(|(a, b)| a - b).collect())
        .collect();
    let rdot = |x: &[BigRational], y: &[BigRational]| -> BigRational {
        x.iter().zip(y).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    };
    let two = BigRational::from_integer(2.into());
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| &two * rdot(&u[i], &u[j])).collect();
            row.push(rdot(&u[i], &u[i]));
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..=k {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    let lambda: Vec<BigRational> = (0..k).map(|i| &m[i][k] / &m[i][i]).collect();
    let center: Vec<BigRational> = (0..p[0].len())
        .map(|t| {
            lambda
                .iter()
                .zip(&u)
                .fold(p[0][t].clone(), |acc, (l, ui)| acc + l * &ui[t])
        })
        .collect();
    let diff: Vec<BigRational> = center.iter().zip(&p[0]).map(|(c, a)| c - a).collect();
    let radius2 = rdot(&diff, &diff);
    Some(ExactBall { center, radius2 })
}

/// Determinant of the Gram matrix of the normalized edge vectors from the
/// first vertex: 1 for orthogonal edges, 0 for dependent ones.
fn normalized_gram_det(pts: &[&[f64]]) -> f64 {
    let w: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|q| {
            let v: Vec<f64> = q.iter().zip(pts[0]).map(|(a, b)| a - b).collect();
            let n = dot(&v, &v).sqrt();
            v.iter().map(|x| x / n).collect()
        })
        .collect();
    let k = w.len();
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            g[i * k + j] = dot(&w[i], &w[j]);
        }
    }
    crate::geometry::linalg::det(&mut g, k)
}

fn circumball(pts: &[&[f64]]) -> Circumball {
    if pts.len() <= 2 {
        let b = support_ball(pts).expect("vertices and edges have a ball");
        return Circumball {
            center: b.center,
            radius: b.radius,
            exact: None,
        };
    }
    let cond = normalized_gram_det(pts);
    if cond.is_finite() && cond > ILL_CONDITIONED {
        if let Some(c) = crate::geometry::linalg::circumcenter(pts) {
            let radius = pts.iter().map(|p| distance(&c, p)).fold(0.0, f64::max);
            return Circumball {
                center: c,
                radius,
                exact: None,
            };
        }
    }
    match exact_ball(pts) {
        Some(e) => Circumball {
            center: e.center.iter().map(|x| x.to_f64().expect("finite")).collect(),
            radius: e.radius2.to_f64().expect("finite").sqrt(),
            exact: Some(e),
        },
        // Exactly dependent vertices (degenerate input): the enclosing
        // ball is the limit of the perturbed circumballs from inside.
        None => {
            let b = crate::geometry::min_enclosing_ball(pts).expect("nonempty");
            Circumball {
                center: b.center,
                radius: b.radius,
                exact: None,
            }
        }
    }
}

/// Whether `p` lies strictly inside the ball of the simplex with vertices
/// `pts`.
fn strictly_inside(ball: &Circumball, pts: &[&[f64]], p: &[f64]) -> bool {
    let d2: f64 = ball.center.iter().zip(p).map(|(c, x)| (c - x) * (c - x)).sum();
    let r2 = ball.radius * ball.radius;
    if (d2 - r2).abs() > NEAR_SPHERE * (d2 + r2) {
        return d2 < r2;
    }
    let exact = match &ball.exact {
        Some(e) => Some(e.clone()),
        None if pts.len() > 2 || ball.radius > 0.0 => exact_ball(pts),
        None => None,
    };
    match exact {
        Some(e) => {
            let power = e
                .center
                .iter()
                .zip(p)
                .fold(BigRational::zero(), |acc, (c, &x)| {
                    let t = c - rat(x);
                    acc + &t * &t
                })
                - &e.radius2;
            power.is_negative()
        }
        None => d2 < r2 * (1.0 - 1e-12),
    }
}

/// Alpha values by downward propagation: a simplex takes the smallest
/// alpha among its cofacets, or its own circumradius when it is Gabriel
/// and that is smaller.
pub(super) fn alpha_values(cloud: &PointCloud, simplices: &[Simplex], index: &HashMap<Simplex, usize>) -> Vec<f64> {
    let n = simplices.len();
    let vertices = |s: &Simplex| -> Vec<&[f64]> { s.vertices().iter().map(|&v| cloud.point(v as usize)).collect() };
    let balls: Vec<Circumball> =
        crate::par::map_slice(crate::par::Execution::Parallel, simplices, |s| circumball(&vertices(s)));
    let mut alpha = vec![0.0; n];
    let mut cof_min = vec![f64::INFINITY; n];
    let mut attached = vec![false; n];
    for i in (0..n).rev() {
        let s = simplices[i];
        if s.dim() == 0 {
            continue;
        }
        alpha[i] = if attached[i] {
            cof_min[i]
        } else {
            balls[i].radius.min(cof_min[i])
        };
        if s.dim() < 2 {
            continue;
        }
        for (j, f) in s.facets().enumerate() {
            let fi = index[&f];
            cof_min[fi] = cof_min[fi].min(alpha[i]);
            let opposite = cloud.point(s.vertices()[j] as usize);
            if !attached[fi] && strictly_inside(&balls[fi], &vertices(&f), opposite) {
                attached[fi] = true;
            }
        }
    }
    alpha
}
