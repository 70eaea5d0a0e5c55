//! Delaunay triangulations in the plane and in space, with alpha values.

mod alpha;
mod predicates;
mod triangulation;

use crate::error::{Error, Result};
use crate::geometry::{check_dim, distance, PointCloud};
use crate::simplex::Simplex;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt::Write as _;
use triangulation::Triangulation;

const INSERTION_SEED: u64 = 0x00de_1a0a_u64;
/// Residuals below this fraction of the bounding-box diagonal count as
/// affinely dependent.
const RANK_TOL: f64 = 1e-10;

/// Full face lattice of a Delaunay triangulation with alpha values in
/// radius units.
///
/// Exact duplicate points are attached to their first occurrence by an
/// edge of alpha value 0 instead of entering the triangulation.
#[derive(Debug, Clone)]
pub struct DelaunayComplex {
    dim: usize,
    n_points: usize,
    fingerprint: u64,
    simplices: Vec<Simplex>,
    alpha: Vec<f64>,
    index: HashMap<Simplex, usize>,
    hull: Vec<u32>,
    degenerate: bool,
}

impl DelaunayComplex {
    /// Ambient dimension of the cloud.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// All simplices sorted by dimension, then vertices.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// Alpha values aligned with [`simplices`](Self::simplices).
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn alpha_of(&self, s: &Simplex) -> Option<f64> {
        self.index_of(s).map(|i| self.alpha[i])
    }

    /// Set when the cloud spans fewer than `dim + 1` affinely independent
    /// points; the lattice is then that of the lower-dimensional hull.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Convex hull vertices (all distinct points for degenerate input).
    pub fn hull_vertices(&self) -> &[u32] {
        &self.hull
    }

    /// Highest simplex dimension present.
    pub fn max_dim(&self) -> usize {
        self.simplices.last().map(|s| s.dim()).unwrap_or(0)
    }

    /// Number of simplices in each dimension.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut c = vec![0; self.max_dim() + 1];
        for s in &self.simplices {
            c[s.dim()] += 1;
        }
        c
    }

    /// Maximal simplices (no proper cofaces).
    pub fn top_simplices(&self) -> Vec<Simplex> {
        let mut covered = vec![false; self.simplices.len()];
        for s in &self.simplices {
            if s.dim() > 0 {
                for f in s.facets() {
                    covered[self.index[&f]] = true;
                }
            }
        }
        self.simplices
            .iter()
            .zip(covered)
            .filter(|(_, c)| !c)
            .map(|(s, _)| *s)
            .collect()
    }

    /// Debug dump: one simplex per line, `dim v0 v1 ... alpha`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, a) in self.simplices.iter().zip(&self.alpha) {
            let _ = write!(out, "{}", s.dim());
            for v in s.vertices() {
                let _ = write!(out, " {v}");
            }
            let _ = writeln!(out, " {a:?}");
        }
        out
    }
}

/// Delaunay triangulation of a cloud in dimension 2 or 3 with alpha values.
pub fn build_delaunay(cloud: &PointCloud) -> Result<DelaunayComplex> {
    let d = cloud.dim();
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "Delaunay triangulation supports dimensions 2 and 3; use the core Čech builder",
        });
    }
    let (reps, dups) = deduplicate(cloud);
    let mut order = reps.clone();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(INSERTION_SEED));
    let (basis, dirs) = affine_frame(cloud, &order);
    let rank = dirs.len();
    let (tops, hull): (Vec<Simplex>, Vec<u32>) = if rank == d {
        triangulate(cloud.coords(), d, &basis, &order)
    } else if rank == 0 {
        (vec![Simplex::new(&[order[0]])], vec![order[0]])
    } else if rank == 1 {
        let origin = cloud.point(basis[0] as usize);
        let mut line: Vec<(f64, u32)> = reps
            .iter()
            .map(|&i| (project(cloud.point(i as usize), origin, &dirs[0]), i))
            .collect();
        line.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let tops = line
            .windows(2)
            .map(|w| Simplex::new(&[w[0].1, w[1].1]))
            .collect();
        (tops, reps.clone())
    } else {
        // Coplanar points in space: triangulate in plane coordinates.
        let origin = cloud.point(basis[0] as usize);
        let mut flat = vec![0.0; cloud.len() * 2];
        for &i in &reps {
            let p = cloud.point(i as usize);
            flat[2 * i as usize] = project(p, origin, &dirs[0]);
            flat[2 * i as usize + 1] = project(p, origin, &dirs[1]);
        }
        let (tops, _) = triangulate(&flat, 2, &basis, &order);
        (tops, reps.clone())
    };
    let mut all: Vec<Simplex> = Vec::new();
    for t in &tops {
        all.extend(t.faces());
    }
    for &(rep, dup) in &dups {
        all.push(Simplex::new(&[dup]));
        all.push(Simplex::new(&[rep, dup]));
    }
    all.sort_unstable();
    all.dedup();
    let index: HashMap<Simplex, usize> = all.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let alpha = alpha::alpha_values(cloud, &all, &index);
    Ok(DelaunayComplex {
        dim: d,
        n_points: cloud.len(),
        fingerprint: cloud.fingerprint(),
        simplices: all,
        alpha,
        index,
        hull,
        degenerate: rank < d,
    })
}

fn triangulate(coords: &[f64], d: usize, basis: &[u32], order: &[u32]) -> (Vec<Simplex>, Vec<u32>) {
    let mut tri = Triangulation::new(coords, d, basis);
    for &p in order {
        if !basis.contains(&p) {
            tri.insert(p);
        }
    }
    let tops = tri
        .finite_cells()
        .iter()
        .map(|v| Simplex::new(v))
        .collect();
    (tops, tri.hull_vertices())
}

/// First occurrences of each distinct point, and `(first, duplicate)`
/// pairs for the rest.
fn deduplicate(cloud: &PointCloud) -> (Vec<u32>, Vec<(u32, u32)>) {
    let mut idx: Vec<u32> = (0..cloud.len() as u32).collect();
    let cmp = |a: &u32, b: &u32| {
        let (p, q) = (cloud.point(*a as usize), cloud.point(*b as usize));
        p.iter()
            .zip(q)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    idx.sort_by(|a, b| cmp(a, b).then(a.cmp(b)));
    let mut reps = Vec::new();
    let mut dups = Vec::new();
    let mut k = 0;
    while k < idx.len() {
        let first = idx[k];
        reps.push(first);
        let mut j = k + 1;
        while j < idx.len() && cmp(&idx[j], &first).is_eq() {
            dups.push((first, idx[j]));
            j += 1;
        }
        k = j;
    }
    reps.sort_unstable();
    (reps, dups)
}

fn project(p: &[f64], origin: &[f64], dir: &[f64]) -> f64 {
    p.iter().zip(origin).zip(dir).map(|((a, o), u)| (a - o) * u).sum()
}

/// Greedy affinely independent subset in insertion order, with an
/// orthonormal basis of its direction space.
fn affine_frame(cloud: &PointCloud, order: &[u32]) -> (Vec<u32>, Vec<Vec<f64>>) {
    let d = cloud.dim();
    let (lo, hi) = cloud.bounding_box();
    let scale = distance(&lo, &hi);
    let origin = cloud.point(order[0] as usize);
    let mut basis = vec![order[0]];
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for &q in &order[1..] {
        if dirs.len() == d {
            break;
        }
        let mut r: Vec<f64> = cloud.point(q as usize).iter().zip(origin).map(|(a, b)| a - b).collect();
        for u in &dirs {
            let c: f64 = r.iter().zip(u).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
        }
        let norm = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > RANK_TOL * scale {
            r.iter_mut().for_each(|a| *a /= norm);
            dirs.push(r);
            basis.push(q);
        }
    }
    (basis, dirs)
}

/// Index of a nearest cloud point to `x`; ties go to the smallest index.
pub fn voronoi_owner(cloud: &PointCloud, x: &[f64]) -> Result<usize> {
    check_dim(cloud.dim(), x.len())?;
    let mut best = (f64::INFINITY, 0);
    for (i, p) in cloud.points().enumerate() {
        let dd = distance(x, p);
        if dd < best.0 {
            best = (dd, i);
        }
    }
    Ok(best.1)
}

/// All nearest cloud points to `x` (exact distance ties).
pub fn voronoi_owners(cloud: &PointCloud, x: &[f64]) -> Result<Vec<usize>> {
    check_dim(cloud.dim(), x.len())?;
    let d: Vec<f64> = cloud.points().map(|p| distance(x, p)).collect();
    let m = d.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((0..d.len()).filter(|&i| d[i] == m).collect())
}

/// Cloud diameter: exhaustive for up to `20_000` points or outside the
/// plane and space, otherwise over convex hull vertices.
pub fn cloud_diameter(cloud: &PointCloud) -> f64 {
    if cloud.len() <= 20_000 || !(cloud.dim() == 2 || cloud.dim() == 3) {
        return cloud.diameter();
    }
    let hull = match build_hull(cloud) {
        Some(h) => h,
        None => return cloud.diameter(),
    };
    let pts: Vec<Vec<f64>> = hull.iter().map(|&i| cloud.point(i as usize).to_vec()).collect();
    PointCloud::new(&pts).map(|c| c.diameter()).unwrap_or(0.0)
}

fn build_hull(cloud: &PointCloud) -> Option<Vec<u32>> {
    let (reps, _) = deduplicate(cloud);
    let mut order = reps;
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(INSERTION_SEED));
    let (basis, dirs) = affine_frame(cloud, &order);
    if dirs.len() < cloud.dim() {
        return None;
    }
    Some(triangulate(cloud.coords(), cloud.dim(), &basis, &order).1)
}

#[cfg(test)]
mod tests;
