use super::{check_dim, distance, NeighborIndex, PointCloud};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Core distance of `x` to `cloud`: the distance to its `ceil(k)`-th nearest
/// neighbor, counting `x` itself when it belongs to the cloud. Infinite when
/// `ceil(k)` exceeds the number of points.
pub fn core_distance(cloud: &PointCloud, x: &[f64], k: f64) -> Result<f64> {
    check_dim(cloud.dim(), x.len())?;
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    let j = k.ceil();
    if j > cloud.len() as f64 {
        return Ok(f64::INFINITY);
    }
    let j = j as usize;
    let mut d: Vec<f64> = cloud.points().map(|p| distance(x, p)).collect();
    let (_, kth, _) = d.select_nth_unstable_by(j - 1, f64::total_cmp);
    Ok(*kth)
}

/// Per-point core distances for a list of integer density values.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreProfile {
    n_points: usize,
    fingerprint: u64,
    k_list: Vec<u32>,
    /// Row-major `n_points x k_list.len()`.
    values: Vec<f64>,
}

impl CoreProfile {
    pub fn k_list(&self) -> &[u32] {
        &self.k_list
    }

    /// Fingerprint of the cloud the profile was computed on.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Core distances of point `a` for every k in the list.
    pub fn row(&self, a: usize) -> &[f64] {
        let m = self.k_list.len();
        &self.values[a * m..(a + 1) * m]
    }

    /// Value at column `ki` of the k list.
    #[inline]
    pub fn at(&self, a: usize, ki: usize) -> f64 {
        self.values[a * self.k_list.len() + ki]
    }

    /// Position of `k` in the k list.
    pub fn k_index(&self, k: u32) -> Option<usize> {
        self.k_list.binary_search(&k).ok()
    }

    /// Core distance for a real `k`, resolved through `ceil(k)`.
    ///
    /// Densities above the point count are infinite even when absent from
    /// the list; other densities must be listed.
    pub fn value(&self, a: usize, k: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
        }
        let kc = k.ceil();
        if kc > self.n_points as f64 {
            return Ok(f64::INFINITY);
        }
        let kc = kc as u32;
        self.k_index(kc)
            .map(|ki| self.at(a, ki))
            .ok_or_else(|| Error::InvalidKList(format!("k = {kc} not in profile")))
    }
}

pub(crate) fn validate_k_list(k_list: &[u32]) -> Result<()> {
    if k_list.is_empty() {
        return Err(Error::InvalidKList("empty k list".into()));
    }
    if k_list[0] < 1 {
        return Err(Error::InvalidKList("k values must be at least 1".into()));
    }
    if k_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidKList("k list must be strictly increasing".into()));
    }
    Ok(())
}

/// Core distances of every cloud point for every `k` in `k_list`, using one
/// kNN query per point.
pub fn core_profile(cloud: &PointCloud, k_list: &[u32]) -> Result<CoreProfile> {
    core_profile_with(cloud, k_list, Execution::Parallel)
}

pub fn core_profile_with(cloud: &PointCloud, k_list: &[u32], exec: Execution) -> Result<CoreProfile> {
    validate_k_list(k_list)?;
    let n = cloud.len();
    let index = NeighborIndex::new(cloud);
    let need = (*k_list.last().unwrap() as usize).min(n);
    let rows = par::map_range(exec, n, |a| {
        let nn = index.knn(cloud.point(a), need);
        k_list
            .iter()
            .map(|&k| {
                let k = k as usize;
                if k > n {
                    f64::INFINITY
                } else {
                    nn[k - 1].1
                }
            })
            .collect::<Vec<f64>>()
    });
    Ok(CoreProfile {
        n_points: n,
        fingerprint: cloud.fingerprint(),
        k_list: k_list.to_vec(),
        values: rows.concat(),
    })
}
