use crate::bifiltration::BiFilteredComplex;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::persistence::compute_persistence;
use crate::slicing::{slice_with, SliceSpec};
use std::fmt::Write as _;

/// Pointwise homology dimensions over a rectangular `(r, k)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertGrid {
    pub degree: usize,
    pub r_values: Vec<f64>,
    pub k_values: Vec<u32>,
    /// `cells[i][j]` is the value at `(r_values[i], k_values[j])`.
    pub cells: Vec<Vec<usize>>,
}

impl HilbertGrid {
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.cells[i][j]
    }

    pub fn max_value(&self) -> usize {
        self.cells.iter().flatten().copied().max().unwrap_or(0)
    }

    /// `steps` evenly spaced radii from 0 to `r_max` inclusive.
    pub fn linear_r_grid(r_max: f64, steps: usize) -> Vec<f64> {
        match steps {
            0 => Vec::new(),
            1 => vec![r_max],
            _ => (0..steps).map(|i| r_max * i as f64 / (steps - 1) as f64).collect(),
        }
    }

    /// CSV matrix: a `degree` row, a header row of k values, then one row
    /// per radius.
    pub fn to_csv(&self) -> String {
        let mut out = format!("degree,{}\n", self.degree);
        out.push_str("r\\k");
        for k in &self.k_values {
            let _ = write!(out, ",{k}");
        }
        out.push('\n');
        for (r, row) in self.r_values.iter().zip(&self.cells) {
            let _ = write!(out, "{r:?}");
            for c in row {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let err = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let (l0, first) = lines.next().ok_or(Error::Empty("hilbert grid file"))?;
        let degree = first
            .trim()
            .strip_prefix("degree,")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| err(l0, "expected `degree,<q>`"))?;
        let (l1, header) = lines.next().ok_or_else(|| err(l0, "missing k header"))?;
        let mut fields = header.split(',').map(str::trim);
        if fields.next() != Some("r\\k") {
            return Err(err(l1, "expected `r\\k` header"));
        }
        let k_values = fields
            .map(|f| f.parse().map_err(|_| err(l1, "bad k value")))
            .collect::<Result<Vec<u32>>>()?;
        let mut r_values = Vec::new();
        let mut cells = Vec::new();
        for (l, line) in lines {
            let mut f = line.split(',').map(str::trim);
            let r: f64 = f
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| err(l, "bad radius"))?;
            let row = f
                .map(|v| v.parse().map_err(|_| err(l, "bad cell")))
                .collect::<Result<Vec<usize>>>()?;
            if row.len() != k_values.len() {
                return Err(err(l, "row length differs from k header"));
            }
            r_values.push(r);
            cells.push(row);
        }
        Ok(HilbertGrid {
            degree,
            r_values,
            k_values,
            cells,
        })
    }
}

/// Hilbert function of `complex` in homology degree `degree` over Z/2.
///
/// Each k column is the bar count of the fixed-k slice diagram; essential
/// bars count at every `r >= birth`.
pub fn hilbert_function(
    complex: &BiFilteredComplex,
    degree: usize,
    r_grid: &[f64],
    k_grid: &[u32],
) -> Result<HilbertGrid> {
    hilbert_function_with(complex, degree, r_grid, k_grid, Execution::Parallel)
}

pub fn hilbert_function_with(
    complex: &BiFilteredComplex,
    degree: usize,
    r_grid: &[f64],
    k_grid: &[u32],
    exec: Execution,
) -> Result<HilbertGrid> {
    if r_grid.iter().any(|r| !r.is_finite()) || r_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("r grid must be finite and strictly increasing".into()));
    }
    if k_grid.is_empty() || k_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidKList("k grid must be nonempty and strictly increasing".into()));
    }
    complex.require_k(k_grid)?;
    let columns = par::map_slice(exec, k_grid, |&k| -> Result<Vec<usize>> {
        let filt = slice_with(complex, SliceSpec::FixedK { k }, Execution::Sequential)?;
        let diagram = compute_persistence(&filt, degree, 2)?;
        Ok(r_grid.iter().map(|&r| diagram.bar_count(degree, r)).collect())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let cells = (0..r_grid.len())
        .map(|i| columns.iter().map(|col| col[i]).collect())
        .collect();
    Ok(HilbertGrid {
        degree,
        r_values: r_grid.to_vec(),
        k_values: k_grid.to_vec(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifiltration::{build_core_cech, build_delaunay_core};
    use crate::delaunay::build_delaunay;
    use crate::geometry::{core_profile, PointCloud};
    use crate::persistence::betti_at;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cloud(seed: u64, n: usize) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        PointCloud::new(&pts).unwrap()
    }

    #[test]
    fn cells_equal_betti_numbers() {
        for seed in 0..6 {
            let cloud = random_cloud(seed, 25);
            let ks: Vec<u32> = (1..=6).collect();
            let prof = core_profile(&cloud, &ks).unwrap();
            let del = build_delaunay(&cloud).unwrap();
            let c = build_delaunay_core(&del, &prof, 1.0).unwrap();
            let r_grid = HilbertGrid::linear_r_grid(1.5, 31);
            for degree in 0..=1 {
                let g = hilbert_function(&c, degree, &r_grid, &ks).unwrap();
                let seq = hilbert_function_with(&c, degree, &r_grid, &ks, Execution::Sequential).unwrap();
                assert_eq!(g, seq);
                for (j, &k) in ks.iter().enumerate() {
                    let filt = crate::slicing::slice(&c, SliceSpec::FixedK { k }).unwrap();
                    for (i, &r) in r_grid.iter().enumerate() {
                        assert_eq!(g.at(i, j), betti_at(&filt, r, degree).unwrap()[degree]);
                    }
                }
            }
        }
    }

    #[test]
    fn degree_zero_extremes_and_k_monotonicity() {
        let cloud = random_cloud(3, 40);
        let ks: Vec<u32> = (1..=8).collect();
        let prof = core_profile(&cloud, &ks).unwrap();
        let del = build_delaunay(&cloud).unwrap();
        let c = build_delaunay_core(&del, &prof, 1.0).unwrap();
        let min_alpha = del.alpha().iter().copied().filter(|&a| a > 0.0).fold(f64::INFINITY, f64::min);
        let big = 10.0 * cloud.diameter();
        let r_grid = vec![0.0, 0.5 * min_alpha, big];
        let g = hilbert_function(&c, 0, &r_grid, &ks).unwrap();
        assert_eq!(g.at(0, 0), 40);
        assert!(g.cells[2].iter().all(|&v| v == 1));
        for row in &g.cells[..2] {
            assert!(row.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let cloud = random_cloud(1, 10);
        let prof = core_profile(&cloud, &[1, 2]).unwrap();
        let c = build_core_cech(&cloud, &prof, 1.0, 2).unwrap();
        assert!(matches!(
            hilbert_function(&c, 0, &[0.0, 1.0], &[1, 3]),
            Err(Error::MissingKValues { .. })
        ));
        assert!(hilbert_function(&c, 0, &[1.0, 0.0], &[1]).is_err());
        assert!(hilbert_function(&c, 0, &[0.0], &[2, 1]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let g = HilbertGrid {
            degree: 1,
            r_values: vec![0.0, 0.1, 1.0 / 3.0],
            k_values: vec![1, 5],
            cells: vec![vec![0, 0], vec![2, 1], vec![1, 0]],
        };
        assert_eq!(HilbertGrid::from_csv(&g.to_csv()).unwrap(), g);
        assert!(HilbertGrid::from_csv("degree,0\nr\\k,1\n0.0,1,2\n").is_err());
    }
}
