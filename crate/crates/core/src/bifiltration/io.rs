use super::{BiFilteredComplex, ComplexKind};
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use std::fmt::Write as _;

/// Writes the `bifil v1` text format.
///
/// Header `bifil 1 <kind> <beta> <dim>`, two metadata comments carrying the
/// point count, cloud fingerprint and density list, then one simplex per
/// line: `dim v0 .. vd ; (f,k) (f,k) ...` with grades sorted by the second
/// parameter.
pub fn write_bifil(c: &BiFilteredComplex) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "bifil 1 {} {:?} {}", c.kind, c.beta, c.dim);
    let _ = writeln!(out, "# points {} {:016x}", c.n_points, c.fingerprint);
    let ks: Vec<String> = c.k_list.iter().map(|k| k.to_string()).collect();
    let _ = writeln!(out, "# k_list {}", ks.join(" "));
    for (s, g) in c.simplices.iter().zip(&c.grades) {
        let _ = write!(out, "{}", s.dim());
        for v in s.vertices() {
            let _ = write!(out, " {v}");
        }
        out.push_str(" ;");
        for &(f, k) in g {
            if c.kind.has_density_axis() {
                let _ = write!(out, " ({f:?},{})", k as u64);
            } else {
                let _ = write!(out, " ({f:?},{k:?})");
            }
        }
        out.push('\n');
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the `bifil v1` text format.
pub fn read_bifil(text: &str) -> Result<BiFilteredComplex> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 5 || h[0] != "bifil" || h[1] != "1" {
        return Err(perr(1, "expected `bifil 1 <kind> <beta> <dim>`"));
    }
    let kind: ComplexKind = h[2].parse().map_err(|_| perr(1, format!("unknown kind `{}`", h[2])))?;
    let beta: f64 = h[3].parse().map_err(|_| perr(1, "bad beta"))?;
    let dim: usize = h[4].parse().map_err(|_| perr(1, "bad dimension"))?;
    let mut n_points = 0;
    let mut fingerprint = 0;
    let mut k_list = Vec::new();
    let mut simplices = Vec::new();
    let mut grades = Vec::new();
    for (i, raw) in lines {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let t: Vec<&str> = meta.split_whitespace().collect();
            match t.first() {
                Some(&"points") if t.len() == 3 => {
                    n_points = t[1].parse().map_err(|_| perr(ln, "bad point count"))?;
                    fingerprint = u64::from_str_radix(t[2], 16).map_err(|_| perr(ln, "bad fingerprint"))?;
                }
                Some(&"k_list") => {
                    k_list = t[1..]
                        .iter()
                        .map(|k| k.parse::<u32>().map_err(|_| perr(ln, format!("bad k `{k}`"))))
                        .collect::<Result<_>>()?;
                }
                _ => {}
            }
            continue;
        }
        let (head, tail) = line.split_once(';').ok_or_else(|| perr(ln, "missing `;`"))?;
        let nums: Vec<u32> = head
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| perr(ln, format!("bad integer `{t}`"))))
            .collect::<Result<_>>()?;
        if nums.len() < 2 || nums[0] as usize + 2 != nums.len() {
            return Err(perr(ln, "simplex dimension does not match its vertex count"));
        }
        let mut verts = nums[1..].to_vec();
        verts.sort_unstable();
        if verts.windows(2).any(|w| w[0] == w[1]) || verts.len() > crate::simplex::MAX_VERTICES {
            return Err(perr(ln, "invalid vertex list"));
        }
        simplices.push(Simplex::new(&verts));
        let mut g = Vec::new();
        for tok in tail.split_whitespace() {
            let inner = tok
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| perr(ln, format!("bad grade `{tok}`")))?;
            let (f, k) = inner.split_once(',').ok_or_else(|| perr(ln, format!("bad grade `{tok}`")))?;
            let f: f64 = f.parse().map_err(|_| perr(ln, format!("bad radius `{f}`")))?;
            let k: f64 = k.parse().map_err(|_| perr(ln, format!("bad parameter `{k}`")))?;
            g.push((f, k));
        }
        grades.push(g);
    }
    Ok(BiFilteredComplex::from_parts(
        kind,
        beta,
        dim,
        n_points,
        fingerprint,
        k_list,
        simplices,
        grades,
    ))
}
