//! Seeded synthetic point clouds: a noisy sample of a manifold plus
//! uniform background noise.
//!
//! Signal points are drawn uniformly from the manifold and perturbed
//! coordinatewise by `N(0, sigma^2)`; noise points are uniform on the
//! smallest axis-parallel box containing the perturbed signal, unless an
//! explicit box is given. Signal and noise use separate ChaCha20 streams,
//! so changing `m` never changes the signal.

use crate::error::{Error, Result};
use crate::geometry::{Label, PointCloud};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manifold {
    /// Torus of revolution in R^3.
    Torus3d,
    /// Product of two unit circles in R^4.
    CliffordTorus4d,
    /// Unit sphere in R^3.
    Sphere2,
    /// Unit circle in R^2.
    Circle,
    /// Concentric circles of radii 0.5 and 1 in R^2.
    TwoCircles,
    /// Three disjoint annuli of different sizes and densities in R^2.
    ThreeAnnuli,
    /// The square `[-1, 1]^2`.
    UniformBox,
}

impl Manifold {
    pub const ALL: [Manifold; 7] = [
        Manifold::Torus3d,
        Manifold::CliffordTorus4d,
        Manifold::Sphere2,
        Manifold::Circle,
        Manifold::TwoCircles,
        Manifold::ThreeAnnuli,
        Manifold::UniformBox,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Manifold::Torus3d => "torus3d",
            Manifold::CliffordTorus4d => "clifford_torus4d",
            Manifold::Sphere2 => "sphere2",
            Manifold::Circle => "circle",
            Manifold::TwoCircles => "two_circles",
            Manifold::ThreeAnnuli => "three_annuli",
            Manifold::UniformBox => "uniform_box",
        }
    }

    pub fn ambient_dim(self) -> usize {
        match self {
            Manifold::Torus3d | Manifold::Sphere2 => 3,
            Manifold::CliffordTorus4d => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Manifold {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Manifold::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownManifold(s.to_string()))
    }
}

/// An annulus `{x : r_in <= |x - center| <= r_out}` carrying a share of
/// the signal points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub center: [f64; 2],
    pub r_in: f64,
    pub r_out: f64,
    pub weight: f64,
}

/// Default three-annuli layout: one large sparse ring, a medium ring and a
/// small dense ring, pairwise disjoint.
pub fn default_annuli() -> Vec<Annulus> {
    vec![
        Annulus {
            center: [0.0, 0.0],
            r_in: 1.0,
            r_out: 1.2,
            weight: 0.5,
        },
        Annulus {
            center: [2.4, 0.9],
            r_in: 0.45,
            r_out: 0.55,
            weight: 0.3,
        },
        Annulus {
            center: [2.2, -1.0],
            r_in: 0.2,
            r_out: 0.25,
            weight: 0.2,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub manifold: Manifold,
    /// Signal points.
    pub n: usize,
    /// Noise points.
    pub m: usize,
    pub sigma: f64,
    pub seed: u64,
    /// Explicit noise box `(lo, hi)`.
    pub noise_box: Option<(Vec<f64>, Vec<f64>)>,
    /// Major and minor radius of the torus of revolution.
    pub torus_radii: (f64, f64),
    pub annuli: Vec<Annulus>,
}

impl DatasetSpec {
    pub fn new(manifold: Manifold, n: usize, m: usize, sigma: f64, seed: u64) -> Self {
        DatasetSpec {
            manifold,
            n,
            m,
            sigma,
            seed,
            noise_box: None,
            torus_radii: (1.0, 0.5),
            annuli: default_annuli(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n + self.m == 0 {
            return bad("dataset needs at least one point".into());
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma must be finite and nonnegative, got {}", self.sigma));
        }
        let (big, small) = self.torus_radii;
        if !(big > 0.0 && small > 0.0 && big.is_finite() && small.is_finite()) {
            return bad("torus radii must be positive".into());
        }
        if self.manifold == Manifold::ThreeAnnuli {
            if self.annuli.is_empty() {
                return bad("annuli list is empty".into());
            }
            for a in &self.annuli {
                if !(a.r_in >= 0.0 && a.r_out > a.r_in && a.weight > 0.0) {
                    return bad(format!("invalid annulus {a:?}"));
                }
            }
        }
        if let Some((lo, hi)) = &self.noise_box {
            let d = self.manifold.ambient_dim();
            if lo.len() != d || hi.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: lo.len().min(hi.len()),
                });
            }
            if lo.iter().zip(hi).any(|(l, h)| !(l <= h) || !l.is_finite() || !h.is_finite()) {
                return bad("noise box needs finite lo <= hi".into());
            }
        }
        Ok(())
    }
}

fn sample_annulus(rng: &mut ChaCha20Rng, a: &Annulus) -> [f64; 2] {
    let t = rng.gen_range(0.0..TAU);
    let rho = rng.gen_range(a.r_in * a.r_in..=a.r_out * a.r_out).sqrt();
    [a.center[0] + rho * t.cos(), a.center[1] + rho * t.sin()]
}

/// One uniform torus point by rejection on the area element, with the
/// number of proposals it took.
fn sample_torus(rng: &mut ChaCha20Rng, big: f64, small: f64) -> ([f64; 3], usize) {
    let mut tries = 0;
    loop {
        tries += 1;
        let theta = rng.gen_range(0.0..TAU);
        let phi = rng.gen_range(0.0..TAU);
        let w = (big + small * theta.cos()) / (big + small);
        if rng.gen_range(0.0..1.0) < w {
            let ring = big + small * theta.cos();
            return ([ring * phi.cos(), ring * phi.sin(), small * theta.sin()], tries);
        }
    }
}

fn sample_manifold(rng: &mut ChaCha20Rng, spec: &DatasetSpec, out: &mut Vec<f64>) {
    match spec.manifold {
        Manifold::Torus3d => {
            let (p, _) = sample_torus(rng, spec.torus_radii.0, spec.torus_radii.1);
            out.extend_from_slice(&p);
        }
        Manifold::CliffordTorus4d => {
            let (a, b) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            out.extend_from_slice(&[a.cos(), a.sin(), b.cos(), b.sin()]);
        }
        Manifold::Sphere2 => loop {
            let g: [f64; 3] = [0; 3].map(|_| StandardNormal.sample(rng));
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            if norm > 1e-12 {
                out.extend(g.iter().map(|c| c / norm));
                break;
            }
        },
        Manifold::Circle => {
            let t = rng.gen_range(0.0..TAU);
            out.extend_from_slice(&[t.cos(), t.sin()]);
        }
        Manifold::TwoCircles => {
            // uniform in arc length: the inner circle carries a third
            let radius = if rng.gen_range(0.0..1.5) < 0.5 { 0.5 } else { 1.0 };
            let t = rng.gen_range(0.0..TAU);
            out.extend_from_slice(&[radius * t.cos(), radius * t.sin()]);
        }
        Manifold::ThreeAnnuli => {
            let total: f64 = spec.annuli.iter().map(|a| a.weight).sum();
            let mut u = rng.gen_range(0.0..total);
            let mut pick = &spec.annuli[spec.annuli.len() - 1];
            for a in &spec.annuli {
                if u < a.weight {
                    pick = a;
                    break;
                }
                u -= a.weight;
            }
            out.extend_from_slice(&sample_annulus(rng, pick));
        }
        Manifold::UniformBox => {
            out.extend_from_slice(&[rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)]);
        }
    }
}

const SIGNAL_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

/// The labelled cloud `Z ∪ Y`: `n` perturbed signal points followed by `m`
/// noise points.
pub fn generate(spec: &DatasetSpec) -> Result<PointCloud> {
    spec.validate()?;
    let d = spec.manifold.ambient_dim();
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    rng.set_stream(SIGNAL_STREAM);
    let mut coords = Vec::with_capacity((spec.n + spec.m) * d);
    for _ in 0..spec.n {
        sample_manifold(&mut rng, spec, &mut coords);
    }
    if spec.sigma > 0.0 {
        let normal = Normal::new(0.0, spec.sigma).expect("valid sigma");
        for c in &mut coords {
            *c += normal.sample(&mut rng);
        }
    }
    let (lo, hi) = match (&spec.noise_box, spec.manifold) {
        (Some((lo, hi)), _) => (lo.clone(), hi.clone()),
        (None, Manifold::UniformBox) => (vec![-1.0; 2], vec![1.0; 2]),
        (None, _) if spec.n == 0 => {
            return Err(Error::InvalidParameter(
                "noise box is undefined without signal points; give an explicit box".into(),
            ))
        }
        (None, _) => PointCloud::from_flat(coords.clone(), d)?.bounding_box(),
    };
    let mut noise_rng = ChaCha20Rng::seed_from_u64(spec.seed);
    noise_rng.set_stream(NOISE_STREAM);
    for _ in 0..spec.m {
        for t in 0..d {
            coords.push(if lo[t] < hi[t] { noise_rng.gen_range(lo[t]..=hi[t]) } else { lo[t] });
        }
    }
    let mut labels = vec![Label::Signal; spec.n];
    labels.resize(spec.n + spec.m, Label::Noise);
    PointCloud::from_flat(coords, d)?.with_labels(labels)
}

/// Seed of the clean reference sample derived from a dataset seed.
pub fn ground_truth_seed(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `n + m` unperturbed manifold points without noise, from a derived seed.
pub fn ground_truth(spec: &DatasetSpec) -> Result<PointCloud> {
    let clean = DatasetSpec {
        n: spec.n + spec.m,
        m: 0,
        sigma: 0.0,
        seed: ground_truth_seed(spec.seed),
        ..spec.clone()
    };
    generate(&clean)
}

/// `n` uniform points in the unit cube `[0, 1]^dim`.
pub fn uniform_cube(n: usize, dim: usize, seed: u64) -> Result<PointCloud> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(NOISE_STREAM);
    PointCloud::from_flat((0..n * dim).map(|_| rng.gen_range(0.0..=1.0)).collect(), dim)
}
