//! Brute-force membership predicates for the multicover, core and
//! Delaunay core bifiltrations, and mechanical verification of the
//! inclusions relating them.
//!
//! Core distances at real `k` resolve through `ceil(k)` and are infinite
//! when `ceil(k)` exceeds the cloud size.

mod verify;

pub use verify::{
    fig3_configuration, interleaving_factor_product, replay_interleavings, stability_sharpness_probe,
    verify_interleavings, verify_stability, verify_stability_pair, verify_stability_suite, InterleavingOptions,
    StabilityOptions, TheoremId, VerificationReport, Violation, BETA_SWEEP,
};

use crate::error::{Error, Result};
use crate::geometry::{check_dim, distance, CoreProfile, PointCloud};
use serde::{Deserialize, Serialize};

/// A point with a bigrade and a core weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipQuery {
    pub x: Vec<f64>,
    pub r: f64,
    pub k: f64,
    pub beta: f64,
}

impl MembershipQuery {
    pub fn new(x: Vec<f64>, r: f64, k: f64, beta: f64) -> Result<Self> {
        let q = MembershipQuery { x, r, k, beta };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !(pos(self.r) && pos(self.k) && pos(self.beta)) {
            return Err(Error::InvalidParameter(format!(
                "query needs finite r, k, beta > 0, got r={}, k={}, beta={}",
                self.r, self.k, self.beta
            )));
        }
        if self.x.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite query point".into()));
        }
        Ok(())
    }
}

/// The `ceil(k)`-th smallest entry of an ascending list, `+∞` past the end.
fn kth(sorted: &[f64], k: f64) -> f64 {
    let j = k.ceil();
    if j > sorted.len() as f64 {
        f64::INFINITY
    } else {
        sorted[(j as usize).max(1) - 1]
    }
}

/// Per-point sorted distance rows of a cloud: core distances at any real k.
pub(crate) struct CloudOracle<'a> {
    pub(crate) cloud: &'a PointCloud,
    rows: Vec<Vec<f64>>,
}

impl<'a> CloudOracle<'a> {
    pub(crate) fn new(cloud: &'a PointCloud) -> Self {
        let rows = cloud
            .points()
            .map(|p| {
                let mut row: Vec<f64> = cloud.points().map(|q| distance(p, q)).collect();
                row.sort_by(f64::total_cmp);
                row
            })
            .collect();
        CloudOracle { cloud, rows }
    }

    pub(crate) fn core(&self, a: usize, k: f64) -> f64 {
        kth(&self.rows[a], k)
    }

    pub(crate) fn query(&self, x: &[f64]) -> QueryPoint {
        QueryPoint::new(self.cloud, x)
    }
}

/// Distances from one ambient point to every cloud point.
pub(crate) struct QueryPoint {
    dists: Vec<f64>,
    sorted: Vec<f64>,
    owners: Vec<usize>,
}

impl QueryPoint {
    pub(crate) fn new(cloud: &PointCloud, x: &[f64]) -> Self {
        let dists: Vec<f64> = cloud.points().map(|p| distance(p, x)).collect();
        let mut sorted = dists.clone();
        sorted.sort_by(f64::total_cmp);
        let dmin = sorted[0];
        let owners = (0..dists.len()).filter(|&a| dists[a] == dmin).collect();
        QueryPoint { dists, sorted, owners }
    }

    pub(crate) fn multicover(&self, r: f64, k: f64) -> bool {
        let count = self.dists.iter().filter(|&&d| d <= r).count();
        count as f64 >= k
    }

    pub(crate) fn gamma_union(&self, r: f64, k: f64) -> bool {
        let core_x = kth(&self.sorted, k);
        self.dists.iter().any(|&d| core_x.max(d) <= r)
    }

    pub(crate) fn gamma_voronoi(&self, r: f64, k: f64) -> bool {
        let core_x = kth(&self.sorted, k);
        self.owners.iter().any(|&a| core_x.max(self.dists[a]) <= r)
    }

    pub(crate) fn core<F: Fn(usize) -> f64>(&self, r: f64, beta: f64, core: F) -> bool {
        (0..self.dists.len()).any(|a| self.dists[a] <= r && beta * core(a) <= r)
    }

    pub(crate) fn delaunay_core<F: Fn(usize) -> f64>(&self, r: f64, beta: f64, core: F) -> bool {
        self.owners.iter().any(|&a| self.dists[a] <= r && beta * core(a) <= r)
    }
}

fn prepared(cloud: &PointCloud, q: &MembershipQuery) -> Result<QueryPoint> {
    q.validate()?;
    check_dim(cloud.dim(), q.x.len())?;
    Ok(QueryPoint::new(cloud, &q.x))
}

fn profile_core<'p>(cloud: &PointCloud, profile: &'p CoreProfile, k: f64) -> Result<Vec<f64>> {
    if profile.fingerprint() != cloud.fingerprint() {
        return Err(Error::CloudMismatch("core profile was computed on another cloud".into()));
    }
    (0..cloud.len()).map(|a| profile.value(a, k)).collect()
}

/// `x` is within `r` of at least `k` cloud points.
pub fn in_multicover(cloud: &PointCloud, q: &MembershipQuery) -> Result<bool> {
    Ok(prepared(cloud, q)?.multicover(q.r, q.k))
}

/// Some cloud point `a` has `d(a, x) <= r` and `beta Core_k(a) <= r`.
pub fn in_core(cloud: &PointCloud, profile: &CoreProfile, q: &MembershipQuery) -> Result<bool> {
    let qp = prepared(cloud, q)?;
    let core = profile_core(cloud, profile, q.k)?;
    Ok(qp.core(q.r, q.beta, |a| core[a]))
}

/// As [`in_core`] with the witness restricted to the nearest cloud points
/// of `x`; ties are resolved by taking the union over all of them.
pub fn in_delaunay_core(cloud: &PointCloud, profile: &CoreProfile, q: &MembershipQuery) -> Result<bool> {
    let qp = prepared(cloud, q)?;
    let core = profile_core(cloud, profile, q.k)?;
    Ok(qp.delaunay_core(q.r, q.beta, |a| core[a]))
}

/// Some cloud point `a` has `max(Core_k(x), d(a, x)) <= r`.
pub fn in_gamma_union(cloud: &PointCloud, q: &MembershipQuery) -> Result<bool> {
    Ok(prepared(cloud, q)?.gamma_union(q.r, q.k))
}

/// As [`in_gamma_union`] with the witness restricted to the nearest cloud
/// points of `x`.
pub fn in_gamma_voronoi_union(cloud: &PointCloud, q: &MembershipQuery) -> Result<bool> {
    Ok(prepared(cloud, q)?.gamma_voronoi(q.r, q.k))
}
