//! Bifiltered simplicial complexes indexed by radius and density.
//!
//! Every simplex carries a staircase of grades `(f_k, k)`: it is present at
//! `(r, k)` when `r >= f_k`. Densities are ordered oppositely, so a grade
//! `(f_k, k)` is redundant when a larger listed density has the same radius.

mod builders;
mod io;

pub use builders::{
    build_core_cech, build_core_cech_with, build_degree_cech, build_delaunay_core,
    build_delaunay_core_with, build_function_delaunay, kde_codensity, BuildOptions,
    CodensityFunction, DEFAULT_SIMPLEX_BUDGET,
};
pub use io::{read_bifil, write_bifil};

use crate::error::{Error, Result};
use crate::simplex::Simplex;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// A point of the parameter plane; `(r, k) <= (r', k')` iff `r <= r'` and
/// `k >= k'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiGrade {
    pub r: f64,
    pub k: f64,
}

impl BiGrade {
    pub fn new(r: f64, k: f64) -> Result<Self> {
        if !(r > 0.0 && k > 0.0) {
            return Err(Error::InvalidParameter(format!("grade ({r}, {k}) must be positive")));
        }
        Ok(BiGrade { r, k })
    }

    pub fn leq(&self, other: &BiGrade) -> bool {
        self.r <= other.r && self.k >= other.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    DelaunayCore,
    CoreCech,
    DegreeCech,
    /// One-critical sublevel bifiltration of a function; its second axis is
    /// ordered normally.
    FunctionDelaunay,
}

impl ComplexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComplexKind::DelaunayCore => "delaunay_core",
            ComplexKind::CoreCech => "core_cech",
            ComplexKind::DegreeCech => "degree_cech",
            ComplexKind::FunctionDelaunay => "function_delaunay",
        }
    }

    /// Whether the second parameter is a density axis with opposite order.
    pub fn has_density_axis(self) -> bool {
        self != ComplexKind::FunctionDelaunay
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComplexKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "delaunay_core" => ComplexKind::DelaunayCore,
            "core_cech" => ComplexKind::CoreCech,
            "degree_cech" => ComplexKind::DegreeCech,
            "function_delaunay" => ComplexKind::FunctionDelaunay,
            other => return Err(Error::InvalidParameter(format!("unknown complex kind `{other}`"))),
        })
    }
}

/// A simplicial complex with per-simplex grade staircases.
#[derive(Debug, Clone, PartialEq)]
pub struct BiFilteredComplex {
    pub(crate) kind: ComplexKind,
    pub(crate) beta: f64,
    pub(crate) dim: usize,
    pub(crate) n_points: usize,
    pub(crate) fingerprint: u64,
    pub(crate) k_list: Vec<u32>,
    pub(crate) simplices: Vec<Simplex>,
    /// `(radius, second parameter)` pairs, sorted by the second parameter.
    pub(crate) grades: Vec<Vec<(f64, f64)>>,
    pub(crate) index: HashMap<Simplex, usize>,
}

impl BiFilteredComplex {
    /// Assembles a complex from full per-k radii (`full[i][j]` for
    /// `k_list[j]`), dropping infinite and optionally redundant grades, and
    /// simplices left without grades.
    pub(crate) fn from_staircases(
        kind: ComplexKind,
        beta: f64,
        dim: usize,
        n_points: usize,
        fingerprint: u64,
        k_list: &[u32],
        simplices: Vec<Simplex>,
        full: Vec<Vec<f64>>,
        prune: bool,
    ) -> Self {
        let mut keep_s = Vec::with_capacity(simplices.len());
        let mut grades = Vec::with_capacity(simplices.len());
        for (s, row) in simplices.into_iter().zip(full) {
            let g = staircase(&row, k_list, prune);
            if !g.is_empty() {
                keep_s.push(s);
                grades.push(g);
            }
        }
        Self::from_parts(kind, beta, dim, n_points, fingerprint, k_list.to_vec(), keep_s, grades)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        kind: ComplexKind,
        beta: f64,
        dim: usize,
        n_points: usize,
        fingerprint: u64,
        k_list: Vec<u32>,
        simplices: Vec<Simplex>,
        grades: Vec<Vec<(f64, f64)>>,
    ) -> Self {
        let index = simplices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        BiFilteredComplex {
            kind,
            beta,
            dim,
            n_points,
            fingerprint,
            k_list,
            simplices,
            grades,
            index,
        }
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Ambient dimension of the underlying cloud.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Densities the grades were computed for (empty for function kinds).
    pub fn k_list(&self) -> &[u32] {
        &self.k_list
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
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

    /// Retained grades of simplex `i` as `(radius, second parameter)`.
    pub fn grades(&self, i: usize) -> &[(f64, f64)] {
        &self.grades[i]
    }

    /// Total number of retained grades.
    pub fn size(&self) -> usize {
        self.grades.iter().map(Vec::len).sum()
    }

    /// Entry radius of simplex `i` at density `k`: the radius of the first
    /// retained grade with density at least `k`, infinite if none.
    pub fn f_k(&self, i: usize, k: u32) -> f64 {
        let k = k as f64;
        let g = &self.grades[i];
        let pos = g.partition_point(|&(_, kk)| kk < k);
        g.get(pos).map(|&(r, _)| r).unwrap_or(f64::INFINITY)
    }

    /// Entry radius of simplex `i` at sublevel `s` of a function kind:
    /// alpha value when the grade threshold is at most `s`, else infinite.
    pub fn f_at_level(&self, i: usize, s: f64) -> f64 {
        self.grades[i]
            .iter()
            .filter(|&&(_, t)| t <= s)
            .map(|&(r, _)| r)
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks that every listed density is available.
    pub fn require_k(&self, ks: &[u32]) -> Result<()> {
        let missing: Vec<u32> = ks
            .iter()
            .copied()
            .filter(|k| self.k_list.binary_search(k).is_err())
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingKValues { missing })
        }
    }

    /// Exhaustive check of face monotonicity at every listed density and of
    /// monotonicity in the density.
    pub fn check_monotone(&self) -> Result<()> {
        for (i, s) in self.simplices.iter().enumerate() {
            let g = &self.grades[i];
            let bad = if self.kind.has_density_axis() {
                g.windows(2).any(|w| w[0].0 > w[1].0 || w[0].1 >= w[1].1)
            } else {
                g.len() != 1
            };
            if bad {
                return Err(Error::InvalidParameter(format!("grades of {s} are not a staircase")));
            }
            for f in s.facets() {
                let fi = self.index_of(&f).ok_or_else(|| {
                    Error::InvalidParameter(format!("face {f} of {s} is missing"))
                })?;
                if self.kind.has_density_axis() {
                    for &k in &self.k_list {
                        let (a, b) = (self.f_k(fi, k), self.f_k(i, k));
                        if a > b {
                            return Err(Error::NonMonotone {
                                face: f.to_string(),
                                face_value: a,
                                coface: s.to_string(),
                                coface_value: b,
                            });
                        }
                    }
                } else {
                    let (fr, fs) = self.grades[fi][0];
                    let (sr, ss) = g[0];
                    if fr > sr || fs > ss {
                        return Err(Error::NonMonotone {
                            face: f.to_string(),
                            face_value: fr,
                            coface: s.to_string(),
                            coface_value: sr,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Retained `(f_k, k)` pairs of one simplex; `row` is nondecreasing.
fn staircase(row: &[f64], k_list: &[u32], prune: bool) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (j, (&f, &k)) in row.iter().zip(k_list).enumerate() {
        if f.is_infinite() {
            break;
        }
        if prune && row.get(j + 1) == Some(&f) {
            continue;
        }
        out.push((f, k as f64));
    }
    out
}
