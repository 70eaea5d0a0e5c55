use super::{CloudOracle, MembershipQuery, QueryPoint};
use crate::error::{Error, Result};
use crate::geometry::{check_dim, PointCloud};
use crate::par::{self, Execution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Core weights swept by the interleaving checks.
pub const BETA_SWEEP: [f64; 7] = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

/// Relative slack on every outer radius, absorbing rounding in chains of
/// triangle inequalities.
const SLACK: f64 = 1e-12;

/// Reports keep at most this many counterexamples; the count is exact.
const MAX_REPORTED: usize = 100;

/// Which family of inclusions a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    /// Core versus multicover interleaving.
    T34,
    /// Delaunay core versus core interleaving.
    L43,
    /// Delaunay core versus multicover interleaving.
    T44,
    /// Gamma balls cover exactly the multicover set.
    L32,
    /// Gamma-Voronoi balls cover exactly the multicover set.
    L44,
    /// Multicover, core and Delaunay core stability.
    Stability,
}

impl TheoremId {
    pub const INTERLEAVINGS: [TheoremId; 5] = [TheoremId::T34, TheoremId::L43, TheoremId::T44, TheoremId::L32, TheoremId::L44];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T34 => "T34",
            TheoremId::L43 => "L43",
            TheoremId::T44 => "T44",
            TheoremId::L32 => "L32",
            TheoremId::L44 => "L44",
            TheoremId::Stability => "stability",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [TheoremId::T34, TheoremId::L43, TheoremId::T44, TheoremId::L32, TheoremId::L44, TheoremId::Stability]
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem `{s}`")))
    }
}

/// One failed inclusion. `seed` replays the random cloud; fixed
/// configurations have no seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub seed: Option<u64>,
    pub configuration: String,
    pub inclusion: String,
    pub query: MembershipQuery,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: TheoremId,
    pub trials: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl VerificationReport {
    fn new(theorem_id: TheoremId) -> Self {
        VerificationReport {
            theorem_id,
            trials: 0,
            violation_count: 0,
            violations: Vec::new(),
            passed: true,
        }
    }

    fn record(&mut self, v: Violation) {
        self.violation_count += 1;
        self.passed = false;
        if self.violations.len() < MAX_REPORTED {
            self.violations.push(v);
        }
    }

    /// Adds the trials and violations of `other`.
    pub fn merge(&mut self, other: VerificationReport) {
        self.trials += other.trials;
        for v in other.violations {
            if self.violations.len() < MAX_REPORTED {
                self.violations.push(v);
            }
        }
        self.violation_count += other.violation_count;
        self.passed = self.violation_count == 0;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Product of the two core/multicover interleaving factors.
pub fn interleaving_factor_product(beta: f64) -> f64 {
    (1.0 + 1.0 / beta) * 1f64.max(2.0 * beta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterleavingOptions {
    pub seed: u64,
    pub clouds: usize,
    pub queries_per_cloud: usize,
    pub max_points: usize,
    pub betas: Vec<f64>,
    /// Multiplies every non-trivial interleaving factor; below 1 this is a
    /// sharpness probe expected to fail.
    pub weaken: f64,
    pub exec: Execution,
}

impl Default for InterleavingOptions {
    fn default() -> Self {
        InterleavingOptions {
            seed: 0,
            clouds: 100,
            queries_per_cloud: 150,
            max_points: 100,
            betas: BETA_SWEEP.to_vec(),
            weaken: 1.0,
            exec: Execution::Parallel,
        }
    }
}

fn mix_seed(seed: u64, i: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A random test cloud: uniform or a mixture of Gaussian clusters, so that
/// core distances vary across the cloud.
fn random_cloud(rng: &mut ChaCha8Rng, max_points: usize, dims: &[usize]) -> PointCloud {
    let n = rng.gen_range(3..=max_points.max(3));
    let d = dims[rng.gen_range(0..dims.len())];
    let mut coords = Vec::with_capacity(n * d);
    if rng.gen_bool(0.5) {
        coords.extend((0..n * d).map(|_| rng.gen_range(-1.0..1.0)));
    } else {
        let clusters = rng.gen_range(1..=4);
        let centers: Vec<Vec<f64>> = (0..clusters).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let spreads: Vec<f64> = (0..clusters).map(|_| rng.gen_range(0.02..0.5)).collect();
        for _ in 0..n {
            let c = rng.gen_range(0..clusters);
            for t in 0..d {
                let z: f64 = StandardNormal.sample(rng);
                coords.push(centers[c][t] + spreads[c] * z);
            }
        }
    }
    PointCloud::from_flat(coords, d).expect("finite coordinates")
}

/// Uniform point of the bounding box inflated by 50%, or a cloud point.
fn sample_query_point(rng: &mut ChaCha8Rng, lo: &[f64], hi: &[f64], clouds: &[&PointCloud]) -> Vec<f64> {
    if rng.gen_bool(0.2) {
        let c = clouds[rng.gen_range(0..clouds.len())];
        return c.point(rng.gen_range(0..c.len())).to_vec();
    }
    lo.iter()
        .zip(hi)
        .map(|(&l, &h)| {
            let pad = 0.25 * (h - l).max(1e-9);
            rng.gen_range(l - pad..=h + pad)
        })
        .collect()
}

fn sample_radius(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    let u: f64 = rng.gen_range(0.0..1.0);
    (scale * u * u).max(1e-9 * scale.max(1e-300))
}

fn sample_k(rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let hi = if rng.gen_bool(0.5) { n.min(10) } else { n } as f64;
    rng.gen_range(1e-3..=hi)
}

fn check(
    report: &mut VerificationReport,
    ok: bool,
    seed: Option<u64>,
    configuration: &str,
    inclusion: &str,
    query: impl FnOnce() -> MembershipQuery,
) {
    if !ok {
        report.record(Violation {
            seed,
            configuration: configuration.to_string(),
            inclusion: inclusion.to_string(),
            query: query(),
        });
    }
}

/// Checks every interleaving inclusion at one `(x, r, k)` for each beta,
/// adding one trial per beta to the three interleaving reports and one
/// trial to each equality report.
#[allow(clippy::too_many_arguments)]
fn check_interleavings_at(
    reports: &mut [VerificationReport; 5],
    oracle: &CloudOracle,
    qp: &QueryPoint,
    x: &[f64],
    r: f64,
    k: f64,
    betas: &[f64],
    weaken: f64,
    seed: Option<u64>,
    configuration: &str,
) {
    let mk = |beta: f64| move || MembershipQuery {
        x: x.to_vec(),
        r,
        k,
        beta,
    };
    let core = |a: usize| oracle.core(a, k);
    let cov = qp.multicover(r, k);
    let [t34, l43, t44, l32, l44] = reports;
    l32.trials += 1;
    check(l32, qp.gamma_union(r, k) == cov, seed, configuration, "gamma union = multicover", mk(1.0));
    l44.trials += 1;
    check(l44, qp.gamma_voronoi(r, k) == cov, seed, configuration, "gamma-Voronoi union = multicover", mk(1.0));
    for &beta in betas {
        let up = |f: f64| f * r * weaken * (1.0 + SLACK);
        let f_cov = 1.0 + 1.0 / beta;
        let f_cr = 1f64.max(2.0 * beta);
        let f_del = 2.0 * beta + 1.0;
        let cr = qp.core(r, beta, core);
        let del = qp.delaunay_core(r, beta, core);

        t34.trials += 1;
        if cr {
            check(t34, qp.multicover(up(f_cov), k), seed, configuration, "Cr(r,k) in Cov((1+1/b)r,k)", mk(beta));
        }
        if cov {
            check(t34, qp.core(up(f_cr), beta, core), seed, configuration, "Cov(r,k) in Cr(max(1,2b)r,k)", mk(beta));
        }

        l43.trials += 1;
        if del {
            check(l43, cr, seed, configuration, "DelCr(r,k) in Cr(r,k)", mk(beta));
        }
        if cr {
            check(l43, qp.delaunay_core(up(f_del), beta, core), seed, configuration, "Cr(r,k) in DelCr((2b+1)r,k)", mk(beta));
        }

        t44.trials += 1;
        if del {
            check(t44, qp.multicover(up(f_cov), k), seed, configuration, "DelCr(r,k) in Cov((1+1/b)r,k)", mk(beta));
        }
        if cov {
            check(t44, qp.delaunay_core(up(f_cr), beta, core), seed, configuration, "Cov(r,k) in DelCr(max(1,2b)r,k)", mk(beta));
        }
    }
}

fn empty_reports() -> [VerificationReport; 5] {
    TheoremId::INTERLEAVINGS.map(VerificationReport::new)
}

/// Runs the interleaving checks on the single random cloud `cloud_seed`.
pub fn replay_interleavings(cloud_seed: u64, opts: &InterleavingOptions) -> Vec<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cloud_seed);
    let cloud = random_cloud(&mut rng, opts.max_points, &[2, 3]);
    let oracle = CloudOracle::new(&cloud);
    let (lo, hi) = cloud.bounding_box();
    let scale = cloud.diameter().max(1e-9);
    let mut reports = empty_reports();
    for _ in 0..opts.queries_per_cloud {
        let x = sample_query_point(&mut rng, &lo, &hi, &[&cloud]);
        let r = sample_radius(&mut rng, scale);
        let k = sample_k(&mut rng, cloud.len());
        let qp = oracle.query(&x);
        check_interleavings_at(&mut reports, &oracle, &qp, &x, r, k, &opts.betas, opts.weaken, Some(cloud_seed), "random");
    }
    reports.into()
}

/// The layout behind the sharpness of the `2 beta + 1` factor: at
/// `beta = 1`, `r = 1`, `k = 3`, the query `(1, 0)` is in the core set
/// through `a' = (0, 0)`, while its Voronoi owner `(2 - eps, 0)` has core
/// distance close to `3`.
pub fn fig3_configuration(eps: f64) -> (PointCloud, MembershipQuery) {
    let theta: f64 = 0.05;
    let pts = vec![
        vec![0.0, 0.0],
        vec![-1.0, 0.0],
        vec![-0.999 * theta.cos(), 0.999 * theta.sin()],
        vec![2.0 - eps, 0.0],
    ];
    let cloud = PointCloud::new(&pts).expect("valid points");
    let q = MembershipQuery {
        x: vec![1.0, 0.0],
        r: 1.0,
        k: 3.0,
        beta: 1.0,
    };
    (cloud, q)
}

/// Random clouds plus the fixed sharpness configuration, all inclusions of
/// every interleaving family. One report per family, in fixed order.
pub fn verify_interleavings(opts: &InterleavingOptions) -> Vec<VerificationReport> {
    let per_cloud = par::map_range(opts.exec, opts.clouds, |i| {
        replay_interleavings(mix_seed(opts.seed, i as u64), opts)
    });
    let mut reports = empty_reports();
    for cloud_reports in per_cloud {
        for (acc, rep) in reports.iter_mut().zip(cloud_reports) {
            acc.merge(rep);
        }
    }
    let (cloud, q) = fig3_configuration(0.01);
    let oracle = CloudOracle::new(&cloud);
    let qp = oracle.query(&q.x);
    let mut fixed = empty_reports();
    check_interleavings_at(&mut fixed, &oracle, &qp, &q.x, q.r, q.k, &[q.beta], opts.weaken, None, "fig3");
    for (acc, rep) in reports.iter_mut().zip(fixed) {
        acc.merge(rep);
    }
    reports.into()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityOptions {
    pub queries: usize,
    pub seed: u64,
    pub beta: f64,
    /// Multiplies the outer radii `r + delta`, `r'` and `r''`.
    pub weaken: f64,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        StabilityOptions {
            queries: 10_000,
            seed: 0,
            beta: 1.0,
            weaken: 1.0,
        }
    }
}

/// Checks every stability inclusion at one `(x, r, k)` in both directions,
/// for the counting and the normalized variants.
#[allow(clippy::too_many_arguments)]
fn check_stability_at(
    report: &mut VerificationReport,
    pair: [(&CloudOracle, &QueryPoint); 2],
    x: &[f64],
    r: f64,
    k: f64,
    s: Option<f64>,
    delta: f64,
    beta: f64,
    weaken: f64,
    seed: Option<u64>,
    configuration: &str,
) {
    let up = |v: f64| v * weaken * (1.0 + SLACK);
    let r1 = up(r + delta);
    let r2 = up((2.0 * (r + beta * delta)).max((1.0 + 1.0 / beta) * r + delta));
    let r3 = up(1f64.max(2.0 * beta) * ((1.0 + 1.0 / beta) * r + delta));
    for (dir, (from, to)) in [(pair[0], pair[1]), (pair[1], pair[0])].into_iter().enumerate() {
        let (oa, qa) = from;
        let (ob, qb) = to;
        let name = |fam: &str| format!("{fam} {}", if dir == 0 { "A->B" } else { "B->A" });
        let mq = |kk: f64| move || MembershipQuery {
            x: x.to_vec(),
            r,
            k: kk,
            beta,
        };
        let (na, nb) = (oa.cloud.len() as f64, ob.cloud.len() as f64);
        // counting variants at k, normalized variants at s
        let mut variants = vec![("", k, k - delta, k)];
        if let Some(s) = s {
            variants.push(("normalized ", s * na, (s - delta) * nb, s));
        }
        for (label, ka, kb, kq) in variants {
            report.trials += 1;
            if qa.multicover(r, ka) {
                check(report, qb.multicover(r1, kb), seed, configuration, &name(&format!("{label}multicover")), mq(kq));
            }
            if qa.core(r, beta, |a| oa.core(a, ka)) {
                check(report, qb.core(r2, beta, |b| ob.core(b, kb)), seed, configuration, &name(&format!("{label}core")), mq(kq));
            }
            if qa.delaunay_core(r, beta, |a| oa.core(a, ka)) {
                check(
                    report,
                    qb.delaunay_core(r3, beta, |b| ob.core(b, kb)),
                    seed,
                    configuration,
                    &name(&format!("{label}delaunay core")),
                    mq(kq),
                );
            }
        }
    }
}

/// Stability inclusions between `a` and `b` for a known bound `delta`
/// strictly above their (counting and normalized) Prohorov distance, on
/// random queries with `k > delta` and `s > delta`.
pub fn verify_stability_pair(a: &PointCloud, b: &PointCloud, delta: f64, opts: &StabilityOptions) -> Result<VerificationReport> {
    check_dim(a.dim(), b.dim())?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    if !(opts.beta > 0.0 && opts.beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {}", opts.beta)));
    }
    let (oa, ob) = (CloudOracle::new(a), CloudOracle::new(b));
    let mut union = a.coords().to_vec();
    union.extend_from_slice(b.coords());
    let both = PointCloud::from_flat(union, a.dim())?;
    let (lo, hi) = both.bounding_box();
    let scale = both.diameter().max(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = VerificationReport::new(TheoremId::Stability);
    let n_max = a.len().max(b.len()) as f64;
    for _ in 0..opts.queries {
        let x = sample_query_point(&mut rng, &lo, &hi, &[a, b]);
        let r = sample_radius(&mut rng, scale);
        let k = if delta < n_max { rng.gen_range(delta..=n_max) } else { delta * 1.5 };
        let k = if k > delta { k } else { n_max.max(delta * 1.5) };
        let s = (delta < 1.0).then(|| rng.gen_range(delta..=1.0)).filter(|&s| s > delta);
        let (qa, qb) = (oa.query(&x), ob.query(&x));
        check_stability_at(&mut report, [(&oa, &qa), (&ob, &qb)], &x, r, k, s, delta, opts.beta, opts.weaken, Some(opts.seed), "pair");
    }
    Ok(report)
}

/// Stability of `cloud` against its translate by `v`, with
/// `delta = |v| + eps`.
pub fn verify_stability(cloud: &PointCloud, v: &[f64], eps: f64, opts: &StabilityOptions) -> Result<VerificationReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let b = cloud.translated(v)?;
    let delta = v.iter().map(|c| c * c).sum::<f64>().sqrt() + eps;
    let mut report = verify_stability_pair(cloud, &b, delta, opts)?;
    for viol in &mut report.violations {
        viol.configuration = "translate".into();
    }
    Ok(report)
}

/// `clouds` random clouds, each against a random translate with
/// `|v| <= 0.1`; cloud `i` is replayable from `mix(seed, i)`.
pub fn verify_stability_suite(clouds: usize, eps: f64, opts: &StabilityOptions, exec: Execution) -> Result<VerificationReport> {
    let reports = par::map_range(exec, clouds, |i| {
        let seed = mix_seed(opts.seed, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud = random_cloud(&mut rng, 100, &[2, 3]);
        let len = rng.gen_range(0.0..0.1);
        let dir: Vec<f64> = (0..cloud.dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = dir.iter().map(|c: &f64| c * c).sum::<f64>().sqrt().max(1e-300);
        let v: Vec<f64> = dir.iter().map(|c| c / norm * len).collect();
        let sub = StabilityOptions { seed, ..opts.clone() };
        verify_stability(&cloud, &v, eps, &sub)
    });
    let mut acc = VerificationReport::new(TheoremId::Stability);
    for r in reports {
        acc.merge(r?);
    }
    Ok(acc)
}

/// A pair at counting distance at most 1 where the core radius `r'` is
/// attained up to lower-order terms: `A = {(r,0), (2r,0)}`, `B = A \ {(r,0)}`,
/// `beta = 1`, query `(0,0)` at `(r, 2)` with `r = 100`. A weakened `r'`
/// below `2r` misses the query.
pub fn stability_sharpness_probe(weaken: f64) -> VerificationReport {
    let r = 100.0;
    let a = PointCloud::new(&[vec![r, 0.0], vec![2.0 * r, 0.0]]).expect("valid");
    let b = PointCloud::new(&[vec![2.0 * r, 0.0]]).expect("valid");
    let delta = 1.0 + 1e-9;
    let (oa, ob) = (CloudOracle::new(&a), CloudOracle::new(&b));
    let x = [0.0, 0.0];
    let (qa, qb) = (oa.query(&x), ob.query(&x));
    let mut report = VerificationReport::new(TheoremId::Stability);
    check_stability_at(&mut report, [(&oa, &qa), (&ob, &qb)], &x, r, 2.0, None, delta, 1.0, weaken, None, "point removal");
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_product_minimized_at_half() {
        let best = BETA_SWEEP
            .iter()
            .copied()
            .min_by(|a, b| interleaving_factor_product(*a).total_cmp(&interleaving_factor_product(*b)))
            .unwrap();
        assert_eq!(best, 0.5);
        assert_eq!(interleaving_factor_product(0.5), 3.0);
    }

    #[test]
    fn theorem_ids_parse() {
        for t in TheoremId::INTERLEAVINGS {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
        assert_eq!("stability".parse::<TheoremId>().unwrap(), TheoremId::Stability);
        assert!("T99".parse::<TheoremId>().is_err());
    }
}
