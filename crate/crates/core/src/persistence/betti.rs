use super::reduce::{check_prime, prepare};
use crate::error::Result;
use crate::slicing::SlicedFiltration;
use std::collections::{BTreeMap, HashMap};

/// Rank of a matrix over `Z/p` given as sparse columns, by Gaussian
/// elimination keyed on each column's largest row.
fn rank_mod_p(cols: Vec<BTreeMap<u32, u32>>, p: u32) -> usize {
    let pp = p as u64;
    let inv = |a: u32| -> u32 { (1..p).find(|&x| (a as u64 * x as u64) % pp == 1).unwrap() };
    let mut basis: HashMap<u32, BTreeMap<u32, u32>> = HashMap::new();
    for mut col in cols {
        while let Some((&row, &c)) = col.iter().next_back() {
            match basis.get(&row) {
                None => {
                    // normalize to a leading 1
                    let ic = inv(c) as u64;
                    for v in col.values_mut() {
                        *v = ((*v as u64 * ic) % pp) as u32;
                    }
                    basis.insert(row, col);
                    break;
                }
                Some(b) => {
                    for (&r, &v) in b {
                        let e = col.entry(r).or_insert(0);
                        *e = ((*e as u64 + (pp - c as u64) * v as u64) % pp) as u32;
                        if *e == 0 {
                            col.remove(&r);
                        }
                    }
                }
            }
        }
    }
    basis.len()
}

/// Betti numbers over `Z/2` of the sublevel complex `{σ : value(σ) <= r}`,
/// in degrees `0..=max_dim`, from ranks of boundary matrices.
pub fn betti_at(filt: &SlicedFiltration, r: f64, max_dim: usize) -> Result<Vec<usize>> {
    betti_at_field(filt, r, max_dim, 2)
}

pub fn betti_at_field(filt: &SlicedFiltration, r: f64, max_dim: usize, field: u32) -> Result<Vec<usize>> {
    check_prime(field)?;
    let prep = prepare(filt, max_dim + 1)?;
    let alive: Vec<usize> = (0..prep.values.len()).filter(|&i| prep.values[i] <= r).collect();
    let mut counts = vec![0usize; max_dim + 2];
    let mut by_dim: Vec<Vec<BTreeMap<u32, u32>>> = vec![Vec::new(); max_dim + 2];
    for &i in &alive {
        let q = prep.dims[i];
        counts[q] += 1;
        if q > 0 {
            let col = prep.boundary[i]
                .iter()
                .map(|&(row, neg)| (row, if neg { field - 1 } else { 1 % field }))
                .collect();
            by_dim[q].push(col);
        }
    }
    let ranks: Vec<usize> = by_dim.into_iter().map(|cols| rank_mod_p(cols, field)).collect();
    Ok((0..=max_dim)
        .map(|q| counts[q] - ranks[q] - ranks[q + 1])
        .collect())
}
