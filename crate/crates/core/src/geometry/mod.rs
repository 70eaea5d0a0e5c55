//! Points, distances, nearest neighbors, core distances and enclosing balls.

mod core;
mod io;
mod kdtree;
pub mod linalg;
mod meb;

pub use self::core::{core_distance, core_profile, core_profile_with, CoreProfile};
pub use self::io::{read_cloud_csv, write_cloud_csv};
pub use self::kdtree::{knn_brute_force, KdTree, NeighborIndex};
pub use self::meb::{min_enclosing_ball, Ball};
pub(crate) use self::core::validate_k_list;
pub(crate) use self::meb::{meb_of_indices, support_ball};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tag attached to generated points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Signal,
    Noise,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Signal => "signal",
            Label::Noise => "noise",
        }
    }
}

/// A finite multiset of points in `R^dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
    labels: Option<Vec<Label>>,
}

impl PointCloud {
    pub fn new(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).ok_or(Error::Empty("point cloud"))?;
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        PointCloud::from_flat(coords, dim)
    }

    /// Builds a cloud from row-major coordinates.
    pub fn from_flat(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::Empty("point cloud"));
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: coords.len() % dim,
            });
        }
        if let Some(bad) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite coordinate in point {}",
                bad / dim
            )));
        }
        Ok(PointCloud {
            coords,
            dim,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    /// Returns a copy of the cloud shifted by `v`.
    pub fn translated(&self, v: &[f64]) -> Result<Self> {
        check_dim(self.dim, v.len())?;
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(v).map(|(a, b)| a + b))
            .collect();
        Ok(PointCloud {
            coords,
            dim: self.dim,
            labels: self.labels.clone(),
        })
    }

    /// Hash of the coordinate bits and dimension; ties derived structures
    /// to the cloud they were built from.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ self.dim as u64;
        for c in &self.coords {
            h ^= c.to_bits();
            h = h.wrapping_mul(0x0000_0100_0000_01b3).rotate_left(17);
        }
        h
    }

    /// Axis-parallel bounding box as `(min, max)` corners.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for t in 0..self.dim {
                lo[t] = lo[t].min(p[t]);
                hi[t] = hi[t].max(p[t]);
            }
        }
        (lo, hi)
    }

    /// Exact diameter by scanning all pairs.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let rows = crate::par::map_range(crate::par::Execution::Parallel, n, |i| {
            let p = self.point(i);
            (i + 1..n).fold(0.0f64, |m, j| m.max(distance(p, self.point(j))))
        });
        rows.into_iter().fold(0.0, f64::max)
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}

/// Euclidean distance. All neighbor computations go through this function
/// so that distances compare bitwise across code paths.
#[inline]
pub fn distance(p: &[f64], q: &[f64]) -> f64 {
    squared_distance(p, q).sqrt()
}

#[inline]
pub fn squared_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Checked Euclidean distance.
pub fn pairwise_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    check_dim(p.len(), q.len())?;
    Ok(distance(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_examples() {
        assert_eq!(pairwise_distance(&[0.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(pairwise_distance(&[0.0, 0.0], &[2.0, 0.0]).unwrap(), 2.0);
        let s3 = 3f64.sqrt();
        let expected = (1.21 + (s3 - 0.1) * (s3 - 0.1)).sqrt();
        let d = pairwise_distance(&[1.0, s3], &[2.1, 0.1]).unwrap();
        assert!((d - expected).abs() < 1e-12);
        // The quoted 1.96816 is a rounding slip; the exact value is 1.968144.
        assert!((d - 1.96816).abs() < 5e-5);
        assert!(matches!(
            pairwise_distance(&[0.0], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cloud_validation() {
        assert!(PointCloud::new(&[]).is_err());
        assert!(PointCloud::new(&[vec![0.0, 1.0], vec![0.0]]).is_err());
        assert!(PointCloud::new(&[vec![f64::NAN]]).is_err());
        let c = PointCloud::new(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.point(2), &[2.0, 0.0]);
        assert!((c.diameter() - 5f64.sqrt()).abs() < 1e-15);
        let (lo, hi) = c.bounding_box();
        assert_eq!((lo, hi), (vec![0.0, 0.0], vec![2.0, 1.0]));
    }
}
