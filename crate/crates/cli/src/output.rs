use anyhow::{Context, Result};
use corebif::persistence::PersistenceDiagram;
use corebif::PointCloud;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// Collects the files written by one run and records them in a manifest.
pub struct Run {
    dir: PathBuf,
    pub name: String,
    inputs: Vec<InputRecord>,
    outputs: Vec<String>,
}

#[derive(Debug, Serialize)]
struct InputRecord {
    path: String,
    points: Option<usize>,
    fingerprint: Option<String>,
}

#[derive(Serialize)]
struct Manifest<'a, G: Serialize, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    global: &'a G,
    threads: usize,
    config: &'a C,
    inputs: &'a [InputRecord],
    outputs: &'a [String],
}

impl Run {
    pub fn new(dir: &Path, name: String) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Run {
            dir: dir.to_path_buf(),
            name,
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn input(&mut self, path: &Path, cloud: Option<&PointCloud>) {
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            points: cloud.map(|c| c.len()),
            fingerprint: cloud.map(|c| format!("{:016x}", c.fingerprint())),
        });
    }

    /// Writes `<dir>/<file>` and records it.
    pub fn write(&mut self, file: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(file);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(file.to_string());
        Ok(path)
    }

    /// Writes `<name>.manifest.json` listing every output of the run.
    pub fn finish<G: Serialize, C: Serialize>(mut self, subcommand: &str, global: &G, config: &C) -> Result<()> {
        let file = format!("{}.manifest.json", self.name);
        let manifest = Manifest {
            tool: "corebif",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            global,
            threads: rayon::current_num_threads(),
            config,
            inputs: &self.inputs,
            outputs: &self.outputs,
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        self.write(&file, &text)?;
        Ok(())
    }
}

/// File stem used as the default output name.
pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Reads a diagram from JSON (by extension) or CSV.
pub fn read_diagram(path: &Path) -> Result<PersistenceDiagram> {
    let text = read_text(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        PersistenceDiagram::from_json(&text)
    } else {
        PersistenceDiagram::from_csv(&text)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

/// `%g`-style rendering with six significant digits.
pub fn fmt_g6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.5e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mant.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
