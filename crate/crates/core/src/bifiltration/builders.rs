use super::{BiFilteredComplex, ComplexKind};
use crate::delaunay::DelaunayComplex;
use crate::error::{Error, Result};
use crate::geometry::{validate_k_list, distance, meb_of_indices, CoreProfile, PointCloud};
use crate::par::{self, Execution};
use crate::simplex::{Simplex, MAX_VERTICES};

/// Default cap on the number of simplices enumerated by the Čech builders.
pub const DEFAULT_SIMPLEX_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Drop grades dominated by a larger density with the same radius.
    pub prune: bool,
    pub exec: Execution,
    pub simplex_budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            prune: true,
            exec: Execution::Parallel,
            simplex_budget: DEFAULT_SIMPLEX_BUDGET,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("beta must be positive and finite, got {beta}")))
    }
}

/// `max(base, beta * max core)` over the vertices, for every listed k.
fn core_row(s: &Simplex, base: f64, profile: &CoreProfile, beta: f64) -> Vec<f64> {
    (0..profile.k_list().len())
        .map(|j| {
            let core = s
                .vertices()
                .iter()
                .map(|&v| profile.at(v as usize, j))
                .fold(0.0, f64::max);
            base.max(beta * core)
        })
        .collect()
}

/// Delaunay core bifiltration: `f_k(σ) = max(α(σ), β · max_{a∈σ} Core_k(a))`.
pub fn build_delaunay_core(complex: &DelaunayComplex, profile: &CoreProfile, beta: f64) -> Result<BiFilteredComplex> {
    build_delaunay_core_with(complex, profile, beta, BuildOptions::default())
}

pub fn build_delaunay_core_with(
    complex: &DelaunayComplex,
    profile: &CoreProfile,
    beta: f64,
    opts: BuildOptions,
) -> Result<BiFilteredComplex> {
    check_beta(beta)?;
    if complex.fingerprint() != profile.fingerprint() {
        return Err(Error::CloudMismatch(
            "core profile was computed on a different cloud than the Delaunay complex".into(),
        ));
    }
    let idx: Vec<usize> = (0..complex.len()).collect();
    let full = par::map_slice(opts.exec, &idx, |&i| {
        core_row(&complex.simplices()[i], complex.alpha()[i], profile, beta)
    });
    Ok(BiFilteredComplex::from_staircases(
        ComplexKind::DelaunayCore,
        beta,
        complex.ambient_dim(),
        complex.n_points(),
        complex.fingerprint(),
        profile.k_list(),
        complex.simplices().to_vec(),
        full,
        opts.prune,
    ))
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// All vertex subsets of dimension at most `max_dim`, sorted by dimension
/// then vertices, after checking the budget.
fn all_subsets(n: usize, max_dim: usize, budget: usize) -> Result<Vec<Simplex>> {
    if max_dim + 1 > MAX_VERTICES {
        return Err(Error::InvalidParameter(format!(
            "max_dim {max_dim} exceeds the supported maximum {}",
            MAX_VERTICES - 1
        )));
    }
    let count: u128 = (1..=max_dim + 1).map(|m| binomial(n as u128, m as u128)).sum();
    if count > budget as u128 {
        return Err(Error::SimplexBudget { count, budget });
    }
    let mut out = Vec::with_capacity(count as usize);
    for m in 1..=(max_dim + 1).min(n) {
        let mut combo: Vec<u32> = (0..m as u32).collect();
        loop {
            out.push(Simplex::new(&combo));
            // rightmost position below its maximum n - m + i
            let mut i = m;
            while i > 0 && combo[i - 1] as usize == n - m + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..m {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    Ok(out)
}

/// Core Čech bifiltration: every vertex subset up to `max_dim` with
/// `f_k(σ) = max(meb(σ).radius, β · max_{a∈σ} Core_k(a))`.
pub fn build_core_cech(cloud: &PointCloud, profile: &CoreProfile, beta: f64, max_dim: usize) -> Result<BiFilteredComplex> {
    build_core_cech_with(cloud, profile, beta, max_dim, BuildOptions::default())
}

pub fn build_core_cech_with(
    cloud: &PointCloud,
    profile: &CoreProfile,
    beta: f64,
    max_dim: usize,
    opts: BuildOptions,
) -> Result<BiFilteredComplex> {
    check_beta(beta)?;
    if cloud.fingerprint() != profile.fingerprint() {
        return Err(Error::CloudMismatch("core profile was computed on a different cloud".into()));
    }
    let simplices = all_subsets(cloud.len(), max_dim, opts.simplex_budget)?;
    let full = par::map_slice(opts.exec, &simplices, |s| {
        let radius = meb_of_indices(cloud, s.vertices()).radius;
        core_row(s, radius, profile, beta)
    });
    Ok(BiFilteredComplex::from_staircases(
        ComplexKind::CoreCech,
        beta,
        cloud.dim(),
        cloud.len(),
        cloud.fingerprint(),
        profile.k_list(),
        simplices,
        full,
        opts.prune,
    ))
}

/// Degree-Čech bifiltration built directly from its definition: `σ` is
/// present at `(r, k)` when its enclosing ball radius is at most `r` and
/// every vertex has at least `k` cloud points (itself included) within
/// `2r`. The minimal `r` is searched among the enclosing radius and the
/// half pairwise distances.
pub fn build_degree_cech(cloud: &PointCloud, k_list: &[u32], max_dim: usize) -> Result<BiFilteredComplex> {
    validate_k_list(k_list)?;
    let opts = BuildOptions::default();
    let n = cloud.len();
    let simplices = all_subsets(n, max_dim, opts.simplex_budget)?;
    let sorted: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            let mut d: Vec<f64> = cloud.points().map(|p| distance(cloud.point(a), p)).collect();
            d.sort_by(f64::total_cmp);
            d
        })
        .collect();
    let full = par::map_slice(opts.exec, &simplices, |s| {
        let meb = meb_of_indices(cloud, s.vertices()).radius;
        let mut cand: Vec<f64> = vec![meb];
        for &a in s.vertices() {
            cand.extend(sorted[a as usize].iter().map(|d| d / 2.0));
        }
        cand.retain(|&r| r >= meb);
        cand.sort_by(f64::total_cmp);
        cand.dedup();
        k_list
            .iter()
            .map(|&k| {
                cand.iter()
                    .copied()
                    .find(|&r| {
                        s.vertices().iter().all(|&a| {
                            let within = sorted[a as usize].partition_point(|&d| d <= 2.0 * r);
                            within >= k as usize
                        })
                    })
                    .unwrap_or(f64::INFINITY)
            })
            .collect::<Vec<f64>>()
    });
    Ok(BiFilteredComplex::from_staircases(
        ComplexKind::DegreeCech,
        0.5,
        cloud.dim(),
        n,
        cloud.fingerprint(),
        k_list,
        simplices,
        full,
        opts.prune,
    ))
}

/// Per-point negative log Gaussian kernel density estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CodensityFunction {
    values: Vec<f64>,
    bandwidth: f64,
    fingerprint: u64,
}

impl CodensityFunction {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// The density estimate itself, `exp(-value)`.
    pub fn raw_density(&self) -> Vec<f64> {
        self.values.iter().map(|v| (-v).exp()).collect()
    }
}

/// `-ln( (1 / (n (2π)^{d/2} h^d)) Σ_b exp(-|a-b|² / 2h²) )` for every point
/// `a`, evaluated with a log-sum-exp.
pub fn kde_codensity(cloud: &PointCloud, bandwidth: f64) -> Result<CodensityFunction> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::InvalidParameter(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let n = cloud.len() as f64;
    let d = cloud.dim() as f64;
    let log_norm = n.ln() + 0.5 * d * (2.0 * std::f64::consts::PI).ln() + d * bandwidth.ln();
    let two_h2 = 2.0 * bandwidth * bandwidth;
    let values = par::map_range(Execution::Parallel, cloud.len(), |a| {
        let x = cloud.point(a);
        // the self term gives the maximal exponent 0
        let s: f64 = cloud
            .points()
            .map(|p| (-crate::geometry::squared_distance(x, p) / two_h2).exp())
            .sum();
        log_norm - s.ln()
    });
    Ok(CodensityFunction {
        values,
        bandwidth,
        fingerprint: cloud.fingerprint(),
    })
}

/// One-critical sublevel bifiltration: `σ` is present at `(r, s)` when
/// `α(σ) <= r` and `max_{a∈σ} f(a) <= s`.
pub fn build_function_delaunay(complex: &DelaunayComplex, f: &CodensityFunction) -> Result<BiFilteredComplex> {
    if complex.fingerprint() != f.fingerprint {
        return Err(Error::CloudMismatch(
            "function was evaluated on a different cloud than the Delaunay complex".into(),
        ));
    }
    let grades = complex
        .simplices()
        .iter()
        .zip(complex.alpha())
        .map(|(s, &a)| {
            let level = s
                .vertices()
                .iter()
                .map(|&v| f.values[v as usize])
                .fold(f64::NEG_INFINITY, f64::max);
            vec![(a, level)]
        })
        .collect();
    Ok(BiFilteredComplex::from_parts(
        ComplexKind::FunctionDelaunay,
        1.0,
        complex.ambient_dim(),
        complex.n_points(),
        complex.fingerprint(),
        Vec::new(),
        complex.simplices().to_vec(),
        grades,
    ))
}
