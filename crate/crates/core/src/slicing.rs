//! One-parameter filtrations along lines of the `(r, k)` plane.
//!
//! A line slice follows `k = ⌈g(r)⌉` with `g(r) = k_max - (k_max / r_max) r`,
//! clamped to `k = 1` beyond `r_max`. `⌈g⌉` equals `k` exactly on
//! `[r_max (1 - k/k_max), r_max (1 - (k-1)/k_max))`, so a simplex enters at
//! the smallest `max(f_k, r_a)` that falls inside its segment.

use crate::bifiltration::{BiFilteredComplex, ComplexKind};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::simplex::Simplex;
use serde::{Deserialize, Serialize};

/// Which one-parameter slice to take.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SliceSpec {
    /// Horizontal line at density `k`.
    FixedK { k: u32 },
    /// Sloped line from `(0, k_max)` to `(r_max, 0)`.
    Line { k_max: u32, r_max: f64 },
    /// Horizontal line at normalized density `s = k / |X|`.
    FixedS { s: f64 },
    /// Sloped line with `k_max = max(1, ⌊s_max |X|⌋)`.
    LineS { s_max: f64, r_max: f64 },
}

impl SliceSpec {
    pub fn is_normalized(&self) -> bool {
        matches!(self, SliceSpec::FixedS { .. } | SliceSpec::LineS { .. })
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            SliceSpec::FixedK { k } if k == 0 => bad("k must be at least 1".into()),
            SliceSpec::Line { k_max, r_max } if k_max == 0 || !(r_max > 0.0 && r_max.is_finite()) => {
                bad(format!("line slice needs k_max >= 1 and r_max > 0, got {k_max}, {r_max}"))
            }
            SliceSpec::FixedS { s } if !(0.0..=1.0).contains(&s) => bad(format!("s must lie in [0, 1], got {s}")),
            SliceSpec::LineS { s_max, r_max } if !(0.0..=1.0).contains(&s_max) || !(r_max > 0.0 && r_max.is_finite()) => {
                bad(format!("line slice needs s_max in [0, 1] and r_max > 0, got {s_max}, {r_max}"))
            }
            _ => Ok(()),
        }
    }
}

/// `max(1, ⌊s n⌋)`, with a relative guard so that decimal fractions such
/// as `0.29 * 100` do not fall one below the intended integer.
fn normalized_k(s: f64, n: usize) -> u32 {
    let raw = (s * n as f64 * (1.0 + 1e-12)).floor();
    (raw.max(1.0)).min(u32::MAX as f64) as u32
}

/// Resolves normalized densities against a cloud size; other specs are
/// returned unchanged.
pub fn normalize_spec(spec: SliceSpec, cloud_size: usize) -> Result<SliceSpec> {
    spec.validate()?;
    Ok(match spec {
        SliceSpec::FixedS { s } => SliceSpec::FixedK {
            k: normalized_k(s, cloud_size),
        },
        SliceSpec::LineS { s_max, r_max } => SliceSpec::Line {
            k_max: normalized_k(s_max, cloud_size),
            r_max,
        },
        other => other,
    })
}

/// A one-parameter filtration: entry values per simplex, `+∞` for
/// simplices that never enter.
#[derive(Debug, Clone, PartialEq)]
pub struct SlicedFiltration {
    simplices: Vec<Simplex>,
    values: Vec<f64>,
    spec: Option<SliceSpec>,
}

impl SlicedFiltration {
    /// A filtration given directly by values; monotonicity is checked by
    /// the persistence routines.
    pub fn new(simplices: Vec<Simplex>, values: Vec<f64>) -> Result<Self> {
        if simplices.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} simplices but {} values",
                simplices.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.is_nan()) {
            return Err(Error::InvalidParameter(format!("filtration value {v}")));
        }
        Ok(SlicedFiltration {
            simplices,
            values,
            spec: None,
        })
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The resolved spec this slice came from, if any.
    pub fn spec(&self) -> Option<SliceSpec> {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }
}

/// Entry radius along the line for one simplex.
fn line_value(c: &BiFilteredComplex, i: usize, k_max: u32, r_max: f64) -> f64 {
    let km = k_max as f64;
    for k in (1..=k_max).rev() {
        let f = c.f_k(i, k);
        if f.is_infinite() {
            continue;
        }
        let r_a = r_max * (k_max - k) as f64 / km;
        let cand = f.max(r_a);
        if k == 1 {
            return cand;
        }
        let r_b = r_max * (k_max - k + 1) as f64 / km;
        if cand < r_b {
            return cand;
        }
    }
    f64::INFINITY
}

/// Slices a density bifiltration.
pub fn slice(complex: &BiFilteredComplex, spec: SliceSpec) -> Result<SlicedFiltration> {
    slice_with(complex, spec, Execution::Parallel)
}

pub fn slice_with(complex: &BiFilteredComplex, spec: SliceSpec, exec: Execution) -> Result<SlicedFiltration> {
    if complex.kind() == ComplexKind::FunctionDelaunay {
        return Err(Error::InvalidParameter(
            "function bifiltrations have no density axis to slice".into(),
        ));
    }
    let spec = normalize_spec(spec, complex.n_points())?;
    let values = match spec {
        SliceSpec::FixedK { k } => {
            complex.require_k(&[k])?;
            par::map_range(exec, complex.len(), |i| complex.f_k(i, k))
        }
        SliceSpec::Line { k_max, r_max } => {
            let needed: Vec<u32> = (1..=k_max).collect();
            complex.require_k(&needed)?;
            par::map_range(exec, complex.len(), |i| line_value(complex, i, k_max, r_max))
        }
        _ => unreachable!("normalized above"),
    };
    Ok(SlicedFiltration {
        simplices: complex.simplices().to_vec(),
        values,
        spec: Some(spec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifiltration::{build_delaunay_core, build_delaunay_core_with, BuildOptions};
    use crate::delaunay::build_delaunay;
    use crate::geometry::{core_profile, PointCloud};
    use proptest::prelude::*;

    fn complex_from_rows(rows: &[Vec<f64>], k_list: &[u32], prune: bool) -> BiFilteredComplex {
        let simplices: Vec<Simplex> = (0..rows.len() as u32).map(|v| Simplex::new(&[v])).collect();
        BiFilteredComplex::from_staircases(
            ComplexKind::CoreCech,
            1.0,
            2,
            rows.len(),
            0,
            k_list,
            simplices,
            rows.to_vec(),
            prune,
        )
    }

    #[test]
    fn examples() {
        assert_eq!(normalize_spec(SliceSpec::LineS { s_max: 0.01, r_max: 1.0 }, 11000).unwrap(), SliceSpec::Line {
            k_max: 110,
            r_max: 1.0
        });
        assert_eq!(normalize_spec(SliceSpec::FixedS { s: 0.0 }, 500).unwrap(), SliceSpec::FixedK { k: 1 });
        assert_eq!(normalize_spec(SliceSpec::LineS { s_max: 0.1, r_max: 2.0 }, 20000).unwrap(), SliceSpec::Line {
            k_max: 2000,
            r_max: 2.0
        });
        assert_eq!(normalize_spec(SliceSpec::FixedS { s: 0.29 }, 100).unwrap(), SliceSpec::FixedK { k: 29 });
        assert!(normalize_spec(SliceSpec::FixedS { s: 1.5 }, 100).is_err());
        // g(2) = 50 for k_max = 100, r_max = 4
        let (k_max, r_max, r) = (100.0f64, 4.0f64, 2.0f64);
        assert_eq!((-(k_max / r_max) * r + k_max).ceil(), 50.0);

        let c = complex_from_rows(&[vec![0.5, 1.0]], &[1, 2], false);
        let s = slice(&c, SliceSpec::Line { k_max: 2, r_max: 2.0 }).unwrap();
        assert_eq!(s.values(), &[1.0]);
        let s = slice(&c, SliceSpec::FixedK { k: 1 }).unwrap();
        assert_eq!(s.values(), &[0.5]);
        match slice(&c, SliceSpec::Line { k_max: 4, r_max: 2.0 }) {
            Err(Error::MissingKValues { missing }) => assert_eq!(missing, vec![3, 4]),
            other => panic!("{other:?}"),
        }
        assert!(slice(&c, SliceSpec::FixedK { k: 3 }).is_err());
    }

    #[test]
    fn segment_boundaries_follow_the_ceiling() {
        // k_max = 2, r_max = 2: ⌈g⌉ = 2 on [0, 1), 1 on [1, ∞).
        let c = complex_from_rows(&[vec![0.2, 0.99], vec![0.2, 1.0], vec![3.0, 3.0]], &[1, 2], false);
        let s = slice(&c, SliceSpec::Line { k_max: 2, r_max: 2.0 }).unwrap();
        // f_2 = 0.99 < 1 enters on the first segment; f_2 = 1.0 misses it and
        // enters at the boundary r = 1 through f_1 = 0.2; past r_max k stays 1.
        assert_eq!(s.values(), &[0.99, 1.0, 3.0]);
    }

    #[test]
    fn fixed_k_equals_alpha_at_k1() {
        let c = PointCloud::new(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![2.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let dc = build_delaunay(&c).unwrap();
        let p = core_profile(&c, &[1, 2]).unwrap();
        let b = build_delaunay_core(&dc, &p, 1.0).unwrap();
        let s = slice(&b, SliceSpec::FixedK { k: 1 }).unwrap();
        assert_eq!(s.values(), dc.alpha());
    }

    /// Grid oracle: smallest grid radius with `f_{⌈g(r)⌉} <= r`.
    fn grid_value(rows: &[f64], k_max: u32, r_max: f64) -> f64 {
        let pitch = 1e-4 * r_max;
        let km = k_max as f64;
        for step in 0..=40_000 {
            let r = step as f64 * pitch;
            let k = ((-(km / r_max) * r + km).ceil()).max(1.0) as usize;
            if rows[k - 1] <= r {
                return r;
            }
        }
        f64::INFINITY
    }

    proptest! {
        #[test]
        fn sweep_matches_grid_and_pruning(
            incs in prop::collection::vec(prop::collection::vec(0.0f64..0.6, 10), 1..6),
            k_max in 1u32..=10,
            r_max in 0.5f64..3.0,
        ) {
            let rows: Vec<Vec<f64>> = incs
                .iter()
                .map(|inc| inc.iter().scan(0.0, |acc, x| { *acc += x; Some(*acc) }).collect())
                .collect();
            let ks: Vec<u32> = (1..=10).collect();
            let full = complex_from_rows(&rows, &ks, false);
            let pruned = complex_from_rows(&rows, &ks, true);
            let spec = SliceSpec::Line { k_max, r_max };
            let a = slice(&full, spec).unwrap();
            let b = slice(&pruned, spec).unwrap();
            prop_assert_eq!(&a, &b);
            for (row, &v) in rows.iter().zip(a.values()) {
                let g = grid_value(row, k_max, r_max);
                prop_assert!(v <= g + 1e-12 && g <= v + 1e-4 * r_max + 1e-12, "{} vs grid {}", v, g);
            }
            for k in 1..10u32 {
                let lo = slice(&full, SliceSpec::FixedK { k }).unwrap();
                let hi = slice(&full, SliceSpec::FixedK { k: k + 1 }).unwrap();
                prop_assert!(lo.values().iter().zip(hi.values()).all(|(x, y)| x <= y));
            }
        }
    }

    #[test]
    fn slices_are_face_monotone() {
        let pts: Vec<Vec<f64>> = (0..40).map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.91).cos()]).collect();
        let c = PointCloud::new(&pts).unwrap();
        let dc = build_delaunay(&c).unwrap();
        let ks: Vec<u32> = (1..=6).collect();
        let p = core_profile(&c, &ks).unwrap();
        let b = build_delaunay_core_with(&dc, &p, 1.0, BuildOptions::default()).unwrap();
        for spec in [SliceSpec::FixedK { k: 3 }, SliceSpec::Line { k_max: 6, r_max: 1.5 }] {
            let s = slice(&b, spec).unwrap();
            for (i, sx) in s.simplices().iter().enumerate() {
                for f in sx.facets() {
                    let j = b.index_of(&f).unwrap();
                    assert!(s.values()[j] <= s.values()[i]);
                }
            }
        }
    }
}
