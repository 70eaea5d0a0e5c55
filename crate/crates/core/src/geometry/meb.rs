use super::linalg::circumcenter;
use super::{distance, PointCloud};
use crate::error::{Error, Result};

/// A closed Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn contains_tol(&self, p: &[f64]) -> bool {
        distance(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-300
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        distance(&self.center, p) <= self.radius + tol
    }
}

/// Smallest ball through all support points, center in their affine hull.
pub(crate) fn support_ball(support: &[&[f64]]) -> Option<Ball> {
    let center = circumcenter(support)?;
    let radius = match support.len() {
        1 => 0.0,
        2 => 0.5 * distance(support[0], support[1]),
        _ => support
            .iter()
            .map(|p| distance(&center, p))
            .fold(0.0, f64::max),
    };
    Some(Ball { center, radius })
}

fn welzl_mtf<'p>(pts: &mut Vec<&'p [f64]>, end: usize, support: &mut Vec<&'p [f64]>, dim: usize) -> Ball {
    let mut ball = if support.is_empty() {
        Ball {
            center: pts[0].to_vec(),
            radius: 0.0,
        }
    } else {
        match support_ball(support) {
            Some(b) => b,
            None => {
                // Affinely dependent support: drop the newest point, which
                // lies in the hull of the others.
                let last = support.pop().unwrap();
                let b = support_ball(support).unwrap_or(Ball {
                    center: last.to_vec(),
                    radius: 0.0,
                });
                support.push(last);
                b
            }
        }
    };
    if support.len() == dim + 1 {
        return ball;
    }
    let mut i = 0;
    while i < end {
        let p = pts[i];
        if !ball.contains_tol(p) {
            support.push(p);
            ball = welzl_mtf(pts, i, support, dim);
            support.pop();
            // move to front
            pts.remove(i);
            pts.insert(0, p);
        }
        i += 1;
    }
    ball
}

/// Exact smallest enclosing ball (Welzl's move-to-front recursion,
/// deterministic). A final pass re-checks containment and grows the radius
/// to cover rounding error.
pub fn min_enclosing_ball(points: &[&[f64]]) -> Result<Ball> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let dim = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let ball = match points.len() {
        1 => Ball {
            center: first.to_vec(),
            radius: 0.0,
        },
        2 => support_ball(points).unwrap(),
        _ => {
            let mut pts = points.to_vec();
            let n = pts.len();
            let mut support = Vec::with_capacity(dim + 1);
            welzl_mtf(&mut pts, n, &mut support, dim)
        }
    };
    let reach = points
        .iter()
        .map(|p| distance(&ball.center, p))
        .fold(0.0, f64::max);
    let radius = if reach > ball.radius { reach } else { ball.radius };
    Ok(Ball {
        center: ball.center,
        radius,
    })
}

/// Smallest enclosing ball of a set of cloud indices.
pub(crate) fn meb_of_indices(cloud: &PointCloud, idx: &[u32]) -> Ball {
    let pts: Vec<&[f64]> = idx.iter().map(|&i| cloud.point(i as usize)).collect();
    min_enclosing_ball(&pts).expect("nonempty simplex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: the smallest ball among circumballs of all
    /// subsets of size <= dim+1 that contain every point.
    fn meb_by_subsets(points: &[Vec<f64>]) -> f64 {
        let n = points.len();
        let dim = points[0].len();
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << n) {
            if mask.count_ones() as usize > dim + 1 {
                continue;
            }
            let sub: Vec<&[f64]> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| points[i].as_slice())
                .collect();
            if let Some(c) = circumcenter(&sub) {
                let r = sub.iter().map(|p| distance(&c, p)).fold(0.0, f64::max);
                if points.iter().all(|p| distance(&c, p) <= r * (1.0 + 1e-9) + 1e-12) {
                    best = best.min(r);
                }
            }
        }
        best
    }

    #[test]
    fn examples() {
        let b = min_enclosing_ball(&[&[0.0, 0.0], &[2.0, 0.0]]).unwrap();
        assert_eq!(b.center, vec![1.0, 0.0]);
        assert_eq!(b.radius, 1.0);
        let b = min_enclosing_ball(&[&[0.0, 0.0]]).unwrap();
        assert_eq!((b.center, b.radius), (vec![0.0, 0.0], 0.0));
        assert!(min_enclosing_ball(&[]).is_err());
        let s3 = 3f64.sqrt();
        let b = min_enclosing_ball(&[&[0.0, 0.0], &[1.0, s3], &[2.1, 0.1]]).unwrap();
        // abc / (4K) for the acute triangle
        let (a, bb, c) = (2.0, (1.21f64 + (s3 - 0.1).powi(2)).sqrt(), (4.41f64 + 0.01).sqrt());
        let area = 0.5 * (1.0 * 0.1 - s3 * 2.1f64).abs();
        let circ = a * bb * c / (4.0 * area);
        assert!((b.radius - circ).abs() < 1e-12);
        // Quoted as 1.1696; the exact value is 1.169756.
        assert!((b.radius - 1.1696).abs() < 5e-4);
    }

    #[test]
    fn coincident_and_collinear() {
        let b = min_enclosing_ball(&[&[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!(b.radius, 0.0);
        let b = min_enclosing_ball(&[&[0.0, 0.0], &[1.0, 0.0], &[3.0, 0.0], &[2.0, 0.0]]).unwrap();
        assert!((b.radius - 1.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn matches_subset_oracle(
            pts in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..7),
        ) {
            let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
            let b = min_enclosing_ball(&refs).unwrap();
            for p in &refs {
                prop_assert!(distance(&b.center, p) <= b.radius + 1e-9);
            }
            prop_assert!((b.radius - meb_by_subsets(&pts)).abs() < 1e-9);
            let mut rev = refs.clone();
            rev.reverse();
            let b2 = min_enclosing_ball(&rev).unwrap();
            prop_assert!((b.radius - b2.radius).abs() < 1e-9);
        }
    }
}
