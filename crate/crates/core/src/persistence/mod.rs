//! Persistent homology of one-parameter filtrations.

mod betti;
mod reduce;

pub use betti::{betti_at, betti_at_field};
pub use reduce::{compute_persistence, compute_persistence_with, PersistenceOptions};

use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt::Write as _;

/// Serializes non-finite values as the token `inf`.
pub(crate) mod ext_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Tok(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Tok(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Tok(t) => Err(serde::de::Error::custom(format!("bad value `{t}`"))),
        }
    }
}

/// A bar `[birth, death)` in homology degree `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    #[serde(with = "ext_f64")]
    pub death: f64,
}

impl PersistencePair {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }
}

/// Bars of all degrees up to `max_dim`, sorted by `(dim, birth, death)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub max_dim: usize,
    pub pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn new(max_dim: usize, mut pairs: Vec<PersistencePair>) -> Self {
        pairs.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        PersistenceDiagram { max_dim, pairs }
    }

    /// Bars of one degree.
    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &PersistencePair> + '_ {
        self.pairs.iter().filter(move |p| p.dim == dim)
    }

    /// Number of bars of degree `dim` alive at `r` (`birth <= r < death`).
    pub fn bar_count(&self, dim: usize, r: f64) -> usize {
        self.in_dim(dim).filter(|p| p.birth <= r && r < p.death).count()
    }

    /// Diagram CSV: header `dim,birth,death`, `inf` for essential bars.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for p in &self.pairs {
            let death = if p.death.is_infinite() {
                "inf".to_string()
            } else {
                format!("{:?}", p.death)
            };
            let _ = writeln!(out, "{},{:?},{}", p.dim, p.birth, death);
        }
        out
    }

    /// Parses the diagram CSV; `max_dim` is the largest degree present.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("dim")) {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            if f.len() != 3 {
                return Err(err("expected `dim,birth,death`"));
            }
            let dim = f[0].parse().map_err(|_| err("bad dim"))?;
            let birth: f64 = f[1].parse().map_err(|_| err("bad birth"))?;
            let death: f64 = f[2].parse().map_err(|_| err("bad death"))?;
            if !birth.is_finite() || death < birth || death.is_nan() {
                return Err(err("pair must satisfy finite birth <= death"));
            }
            pairs.push(PersistencePair { dim, birth, death });
        }
        let max_dim = pairs.iter().map(|p| p.dim).max().unwrap_or(0);
        Ok(PersistenceDiagram::new(max_dim, pairs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: PersistenceDiagram = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        Ok(PersistenceDiagram::new(d.max_dim, d.pairs))
    }
}

#[cfg(test)]
mod tests;
