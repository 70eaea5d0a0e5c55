use crate::output::{fmt_g6, read_diagram, read_text, stem, Run};
use crate::{
    BenchmarkArgs, BottleneckArgs, Cli, Command, CoreProfileArgs, Failure, Format, GenerateArgs, GlobalArgs,
    HilbertArgs, Kind, Mode, SliceArgs, Theorem, VerifyArgs,
};
use anyhow::{anyhow, bail, Context, Result};
use corebif::analysis::{bottleneck_distance, diagram_svg, hilbert_function, hilbert_svg, HilbertGrid};
use corebif::bifiltration::{
    build_core_cech, build_delaunay_core, read_bifil, write_bifil, BiFilteredComplex, ComplexKind,
};
use corebif::datasets::{self, DatasetSpec, Manifold};
use corebif::delaunay::{build_delaunay, cloud_diameter};
use corebif::geometry::{core_profile, read_cloud_csv, write_cloud_csv};
use corebif::oracle::{
    stability_sharpness_probe, verify_interleavings, verify_stability_suite, InterleavingOptions,
    StabilityOptions, TheoremId, VerificationReport,
};
use corebif::persistence::{compute_persistence_with, PersistenceDiagram, PersistenceOptions};
use corebif::slicing::{normalize_spec, slice, SliceSpec};
use corebif::{Execution, PointCloud};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

pub fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let g = cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(anyhow!("--threads must be at least 1").into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let sub = cli.command.name();
    match &cli.command {
        Command::Generate(a) => finish(generate(&g, a)?, sub, &g, a),
        Command::SlicePersist(a) => finish(slice_persist(&g, a)?, sub, &g, a),
        Command::Bottleneck(a) => finish(bottleneck(&g, a)?, sub, &g, a),
        Command::Hilbert(a) => finish(hilbert(&g, a)?, sub, &g, a),
        Command::Verify(a) => {
            let (run, failed) = verify(&g, a)?;
            finish(run, sub, &g, a)?;
            match failed.is_empty() {
                true => Ok(()),
                false => Err(Failure::Verification(failed.join(", "))),
            }
        }
        Command::Benchmark(a) => finish(benchmark(&g, a)?, sub, &g, a),
        Command::CoreProfile(a) => finish(core_profile_dump(&g, a)?, sub, &g, a),
    }
}

fn finish<C: Serialize>(run: Run, sub: &str, g: &GlobalArgs, config: &C) -> std::result::Result<(), Failure> {
    run.finish(sub, g, config).map_err(Failure::Usage)
}

fn run_for(g: &GlobalArgs, default: String) -> Result<Run> {
    Run::new(&g.out, g.name.clone().unwrap_or(default))
}

fn read_cloud(path: &Path) -> Result<PointCloud> {
    read_cloud_csv(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn generate(g: &GlobalArgs, a: &GenerateArgs) -> Result<Run> {
    let manifold: Manifold = a.manifold.parse()?;
    let mut spec = DatasetSpec::new(manifold, a.n, a.m, a.sigma, g.seed);
    if let Some(b) = &a.noise_box {
        if b.len() % 2 != 0 {
            bail!("--box needs an even number of values: lower corner then upper corner");
        }
        let (lo, hi) = b.split_at(b.len() / 2);
        spec.noise_box = Some((lo.to_vec(), hi.to_vec()));
    }
    if let Some(r) = &a.torus_radii {
        spec.torus_radii = (r[0], r[1]);
    }
    let cloud = if a.ground_truth {
        datasets::ground_truth(&spec)?
    } else {
        datasets::generate(&spec)?
    };
    let mut run = run_for(g, manifold.as_str().to_string())?;
    let file = format!("{}.csv", run.name);
    run.write(&file, &write_cloud_csv(&cloud, true))?;
    println!("wrote {} points to {}", cloud.len(), g.out.join(file).display());
    Ok(run)
}

fn parse_r_max(text: &str, cloud: Option<&PointCloud>) -> Result<f64> {
    if text == "diam" {
        let cloud = cloud.ok_or_else(|| anyhow!("--r-max diam needs a point cloud input"))?;
        return Ok(cloud_diameter(cloud));
    }
    let v: f64 = text
        .parse()
        .map_err(|_| anyhow!("--r-max must be a number or `diam`, got `{text}`"))?;
    if !(v > 0.0 && v.is_finite()) {
        bail!("--r-max must be positive and finite, got {v}");
    }
    Ok(v)
}

/// Cloud or prebuilt bifiltration named by `--input`.
enum Input {
    Cloud(PointCloud),
    Complex(BiFilteredComplex),
}

fn read_input(path: &Path) -> Result<Input> {
    if path.extension().is_some_and(|e| e == "bifil") {
        let c = read_bifil(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
        Ok(Input::Complex(c))
    } else {
        Ok(Input::Cloud(read_cloud(path)?))
    }
}

fn check_kind(kind: Kind, cloud: &PointCloud) -> Result<()> {
    if kind == Kind::DelaunayCore && !(cloud.dim() == 2 || cloud.dim() == 3) {
        bail!(
            "--kind delaunay_core needs a 2- or 3-dimensional cloud, got dimension {}; use --kind core_cech instead",
            cloud.dim()
        );
    }
    Ok(())
}

/// Builds the requested bifiltration with every density in `k_list`.
fn build(kind: Kind, cloud: &PointCloud, k_list: &[u32], beta: f64, max_simplex_dim: usize) -> Result<BiFilteredComplex> {
    check_kind(kind, cloud)?;
    let profile = core_profile(cloud, k_list)?;
    Ok(match kind {
        Kind::DelaunayCore => build_delaunay_core(&build_delaunay(cloud)?, &profile, beta)?,
        Kind::CoreCech => build_core_cech(cloud, &profile, beta, max_simplex_dim)?,
    })
}

fn slice_spec(a: &SliceArgs, cloud: Option<&PointCloud>) -> Result<SliceSpec> {
    Ok(match a.mode {
        Mode::Fixed => match (a.k, a.s) {
            (Some(k), None) => SliceSpec::FixedK { k },
            (None, Some(s)) => SliceSpec::FixedS { s },
            _ => bail!("--mode fixed needs exactly one of --k and --s"),
        },
        Mode::Line => {
            let r_max = parse_r_max(&a.r_max, cloud)?;
            match (a.k_max, a.s_max) {
                (Some(k_max), None) => SliceSpec::Line { k_max, r_max },
                (None, Some(s_max)) => SliceSpec::LineS { s_max, r_max },
                _ => bail!("--mode line needs exactly one of --k-max and --s-max"),
            }
        }
    })
}

fn slice_persist(g: &GlobalArgs, a: &SliceArgs) -> Result<Run> {
    let input = read_input(&a.input)?;
    let cloud = match &input {
        Input::Cloud(c) => Some(c),
        Input::Complex(_) => None,
    };
    let n_points = match &input {
        Input::Cloud(c) => c.len(),
        Input::Complex(c) => c.n_points(),
    };
    let spec = normalize_spec(slice_spec(a, cloud)?, n_points)?;
    let mut run = run_for(g, stem(&a.input))?;
    run.input(&a.input, cloud);
    let complex = match input {
        Input::Cloud(c) => {
            let k_list: Vec<u32> = match spec {
                SliceSpec::FixedK { k } => vec![k],
                SliceSpec::Line { k_max, .. } => (1..=k_max).collect(),
                _ => unreachable!("normalized"),
            };
            build(a.kind, &c, &k_list, a.beta, a.max_dim + 1)?
        }
        Input::Complex(c) => c,
    };
    if a.save_bifil {
        let file = format!("{}.bifil", run.name);
        run.write(&file, &write_bifil(&complex))?;
    }
    let filt = slice(&complex, spec)?;
    let opts = PersistenceOptions {
        field: a.field,
        drop_zero: a.drop_zero,
        ..PersistenceOptions::default()
    };
    let diagram = compute_persistence_with(&filt, a.max_dim, opts)?;
    for q in 0..=a.max_dim {
        let pairs = diagram.in_dim(q).copied().collect();
        let part = PersistenceDiagram::new(q, pairs);
        let base = format!("{}_H{q}", run.name);
        run.write(&format!("{base}.csv"), &part.to_csv())?;
        run.write(&format!("{base}.json"), &(part.to_json() + "\n"))?;
        println!("H{q}: {} bars", part.pairs.len());
    }
    if g.format == Format::Svg {
        let file = format!("{}_diagram.svg", run.name);
        run.write(&file, &diagram_svg(&diagram))?;
    }
    Ok(run)
}

#[derive(Serialize)]
struct BottleneckResult<'a> {
    a: &'a Path,
    b: &'a Path,
    dim: usize,
    /// Decimal text so that `inf` survives JSON.
    distance: String,
}

fn bottleneck(g: &GlobalArgs, a: &BottleneckArgs) -> Result<Run> {
    let da = read_diagram(&a.diag_a)?;
    let db = read_diagram(&a.diag_b)?;
    let d = bottleneck_distance(&da, &db, a.dim);
    let text = fmt_g6(d);
    println!("{text}");
    let mut run = run_for(g, "bottleneck".into())?;
    run.input(&a.diag_a, None);
    run.input(&a.diag_b, None);
    let result = BottleneckResult {
        a: &a.diag_a,
        b: &a.diag_b,
        dim: a.dim,
        distance: if d.is_finite() { format!("{d:?}") } else { text },
    };
    let file = format!("{}.json", run.name);
    run.write(&file, &(serde_json::to_string_pretty(&result)? + "\n"))?;
    Ok(run)
}

/// `1, 1 + step, 1 + 2 step, ..` below `k_max`, then `k_max`.
pub fn k_grid(k_max: u32, step: u32) -> Result<Vec<u32>> {
    if k_max == 0 || step == 0 {
        bail!("--k-max and --k-step must be at least 1");
    }
    let mut ks: Vec<u32> = (1..k_max).step_by(step as usize).collect();
    ks.push(k_max);
    Ok(ks)
}

fn hilbert(g: &GlobalArgs, a: &HilbertArgs) -> Result<Run> {
    if a.r_steps == 0 {
        bail!("--r-steps must be at least 1");
    }
    let ks = k_grid(a.k_max, a.k_step)?;
    let input = read_input(&a.input)?;
    let mut run = run_for(g, format!("{}_hilbert", stem(&a.input)))?;
    let (complex, r_max) = match input {
        Input::Cloud(c) => {
            run.input(&a.input, Some(&c));
            let r_max = match &a.r_max {
                Some(t) => parse_r_max(t, Some(&c))?,
                None => cloud_diameter(&c) / 2.0,
            };
            (build(a.kind, &c, &ks, a.beta, a.degree + 1)?, r_max)
        }
        Input::Complex(c) => {
            run.input(&a.input, None);
            if c.kind() == ComplexKind::FunctionDelaunay {
                bail!("function bifiltrations have no density axis");
            }
            let t = a.r_max.as_deref().ok_or_else(|| anyhow!("--r-max is required for a bifil input"))?;
            (c, parse_r_max(t, None)?)
        }
    };
    if !(r_max > 0.0) {
        bail!("radius range is empty: the cloud has diameter 0");
    }
    let r_grid = HilbertGrid::linear_r_grid(r_max, a.r_steps);
    let grid = hilbert_function(&complex, a.degree, &r_grid, &ks)?;
    let base = run.name.clone();
    run.write(&format!("{base}.csv"), &grid.to_csv())?;
    run.write(&format!("{base}.svg"), &hilbert_svg(&grid))?;
    println!("H{} Hilbert function: {} x {} grid, max {}", a.degree, r_grid.len(), ks.len(), grid.max_value());
    Ok(run)
}

fn verify(g: &GlobalArgs, a: &VerifyArgs) -> Result<(Run, Vec<String>)> {
    if a.clouds == 0 || a.trials == 0 {
        bail!("--clouds and --trials must be at least 1");
    }
    if !(a.weaken > 0.0 && a.weaken.is_finite()) {
        bail!("--weaken must be positive");
    }
    let per_cloud = a.trials.div_ceil(a.clouds);
    let mut reports: Vec<VerificationReport> = Vec::new();
    let wanted = |t: TheoremId| match a.theorem {
        Theorem::All => true,
        Theorem::T34 => t == TheoremId::T34,
        Theorem::L43 => t == TheoremId::L43,
        Theorem::T44 => t == TheoremId::T44,
        Theorem::L32 => t == TheoremId::L32,
        Theorem::L44 => t == TheoremId::L44,
        Theorem::Stability => t == TheoremId::Stability,
    };
    if TheoremId::INTERLEAVINGS.iter().any(|&t| wanted(t)) {
        let opts = InterleavingOptions {
            seed: g.seed,
            clouds: a.clouds,
            queries_per_cloud: per_cloud,
            weaken: a.weaken,
            ..InterleavingOptions::default()
        };
        reports.extend(verify_interleavings(&opts).into_iter().filter(|r| wanted(r.theorem_id)));
    }
    if wanted(TheoremId::Stability) {
        let opts = StabilityOptions {
            queries: per_cloud,
            seed: g.seed,
            beta: a.beta,
            weaken: a.weaken,
        };
        let mut report = verify_stability_suite(a.clouds, a.eps, &opts, Execution::Parallel)?;
        report.merge(stability_sharpness_probe(a.weaken));
        reports.push(report);
    }
    let mut run = run_for(g, "verify".into())?;
    let mut failed = Vec::new();
    for r in &reports {
        let id = r.theorem_id.as_str();
        run.write(&format!("{}_{id}.json", run.name), &(r.to_json() + "\n"))?;
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{id}: {status} ({} trials, {} violations)", r.trials, r.violation_count);
        if !r.passed {
            failed.push(id.to_string());
        }
    }
    Ok((run, failed))
}

fn benchmark(g: &GlobalArgs, a: &BenchmarkArgs) -> Result<Run> {
    if !(a.dim == 2 || a.dim == 3) {
        bail!("--dim must be 2 or 3");
    }
    if a.n.iter().any(|&n| n == 0) || a.seeds == 0 {
        bail!("--n values and --seeds must be at least 1");
    }
    let ks = k_grid(a.k_max, a.k_step)?;
    let mut csv = String::from("n,dim,k_max,k_step,seed,size,delaunay_simplices,seconds\n");
    for &n in &a.n {
        for s in 0..a.seeds {
            let seed = g.seed.wrapping_add(s);
            let cloud = datasets::uniform_cube(n, a.dim, seed)?;
            let start = Instant::now();
            let profile = core_profile(&cloud, &ks)?;
            let del = build_delaunay(&cloud)?;
            let complex = build_delaunay_core(&del, &profile, 1.0)?;
            let secs = start.elapsed().as_secs_f64();
            let _ = writeln!(
                csv,
                "{n},{},{},{},{seed},{},{},{secs:.3}",
                a.dim,
                a.k_max,
                a.k_step,
                complex.size(),
                del.len()
            );
            println!("n={n} seed={seed}: size {} in {secs:.3} s", complex.size());
        }
    }
    let mut run = run_for(g, "benchmark".into())?;
    let file = format!("{}.csv", run.name);
    run.write(&file, &csv)?;
    Ok(run)
}

fn core_profile_dump(g: &GlobalArgs, a: &CoreProfileArgs) -> Result<Run> {
    let ks = match &a.k {
        Some(ks) => ks.clone(),
        None if a.k_max >= 1 => (1..=a.k_max).collect(),
        None => bail!("--k-max must be at least 1"),
    };
    let cloud = read_cloud(&a.input)?;
    let profile = core_profile(&cloud, &ks)?;
    let mut run = run_for(g, format!("{}_core", stem(&a.input)))?;
    run.input(&a.input, Some(&cloud));
    let mut csv = String::from("point");
    for k in profile.k_list() {
        let _ = write!(csv, ",k{k}");
    }
    csv.push('\n');
    for p in 0..cloud.len() {
        let _ = write!(csv, "{p}");
        for v in profile.row(p) {
            let _ = write!(csv, ",{v:?}");
        }
        csv.push('\n');
    }
    let base = run.name.clone();
    run.write(&format!("{base}.csv"), &csv)?;
    if a.complex || a.bifil {
        check_kind(Kind::DelaunayCore, &cloud)?;
        let del = build_delaunay(&cloud)?;
        if a.complex {
            run.write(&format!("{base}.complex"), &del.dump())?;
        }
        if a.bifil {
            let c = build_delaunay_core(&del, &profile, a.beta)?;
            run.write(&format!("{base}.bifil"), &write_bifil(&c))?;
        }
    }
    println!("core distances of {} points at {} densities", cloud.len(), ks.len());
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_grid_follows_step_pattern() {
        assert_eq!(k_grid(4, 1).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(k_grid(1, 5).unwrap(), vec![1]);
        let g = k_grid(1000, 10).unwrap();
        assert_eq!(&g[..3], &[1, 11, 21]);
        assert_eq!(&g[g.len() - 2..], &[991, 1000]);
        assert!(k_grid(0, 1).is_err());
        assert!(k_grid(5, 0).is_err());
    }
}
