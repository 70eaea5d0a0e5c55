use super::{PersistenceDiagram, PersistencePair};
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::slicing::SlicedFiltration;
use std::collections::HashMap;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PersistenceOptions {
    /// Prime coefficient field.
    pub field: u32,
    /// Skip columns known to reduce to zero.
    pub clearing: bool,
    /// Omit bars with `birth == death`.
    pub drop_zero: bool,
}

impl Default for PersistenceOptions {
    fn default() -> Self {
        PersistenceOptions {
            field: 2,
            clearing: true,
            drop_zero: false,
        }
    }
}

pub(crate) fn check_prime(p: u32) -> Result<()> {
    if p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| p % d != 0) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Finite simplices up to `top_dim`, sorted by `(value, dim, input
/// index)`, with boundaries as sorted positions in that order.
pub(crate) struct Prepared {
    pub values: Vec<f64>,
    pub dims: Vec<usize>,
    pub boundary: Vec<Vec<(u32, bool)>>,
}

/// Orders the filtration and checks that every face enters no later than
/// its cofaces. Boundary entries carry the sign of `(-1)^i`, `true` for
/// negative.
pub(crate) fn prepare(filt: &SlicedFiltration, top_dim: usize) -> Result<Prepared> {
    let simplices = filt.simplices();
    let values = filt.values();
    let all: HashMap<Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut keep: Vec<usize> = (0..simplices.len())
        .filter(|&i| values[i].is_finite() && simplices[i].dim() <= top_dim)
        .collect();
    keep.sort_by(|&a, &b| {
        values[a]
            .total_cmp(&values[b])
            .then(simplices[a].dim().cmp(&simplices[b].dim()))
            .then(a.cmp(&b))
    });
    let mut pos = vec![NONE; simplices.len()];
    for (p, &i) in keep.iter().enumerate() {
        pos[i] = p as u32;
    }
    let mut boundary = Vec::with_capacity(keep.len());
    for &i in &keep {
        let s = simplices[i];
        let mut col = Vec::with_capacity(s.num_vertices());
        for (j, f) in s.facets().enumerate() {
            let fi = all.get(&f).copied();
            let fv = fi.map(|k| values[k]).unwrap_or(f64::INFINITY);
            if fv > values[i] || fi.is_none() {
                return Err(Error::NonMonotone {
                    face: f.to_string(),
                    face_value: fv,
                    coface: s.to_string(),
                    coface_value: values[i],
                });
            }
            col.push((pos[fi.unwrap()], j % 2 == 1));
        }
        col.sort_unstable();
        boundary.push(col);
    }
    Ok(Prepared {
        values: keep.iter().map(|&i| values[i]).collect(),
        dims: keep.iter().map(|&i| simplices[i].dim()).collect(),
        boundary,
    })
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// `a + factor * b` over `Z/p`, both sorted by row.
fn axpy(a: &[(u32, u32)], factor: u32, b: &[(u32, u32)], p: u32, out: &mut Vec<(u32, u32)>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    let mul = |c: u32| ((c as u64 * factor as u64) % p as u64) as u32;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, mul(b[j].1)));
            j += 1;
        } else {
            let c = (a[i].1 + mul(b[j].1)) % p;
            if c != 0 {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
}

/// Persistence diagram in degrees `0..=max_dim` over `Z/field`, with
/// clearing and zero-length bars kept.
pub fn compute_persistence(filt: &SlicedFiltration, max_dim: usize, field: u32) -> Result<PersistenceDiagram> {
    compute_persistence_with(
        filt,
        max_dim,
        PersistenceOptions {
            field,
            ..Default::default()
        },
    )
}

pub fn compute_persistence_with(
    filt: &SlicedFiltration,
    max_dim: usize,
    opts: PersistenceOptions,
) -> Result<PersistenceDiagram> {
    check_prime(opts.field)?;
    let p = opts.field;
    let prep = prepare(filt, max_dim + 1)?;
    let n = prep.values.len();
    let mut cols: Vec<Vec<(u32, u32)>> = prep
        .boundary
        .iter()
        .map(|b| b.iter().map(|&(r, neg)| (r, if neg { p - 1 } else { 1 % p })).collect())
        .collect();
    let mut pivot_of_row = vec![NONE; n];
    let mut cleared = vec![false; n];
    let order: Vec<usize> = if opts.clearing {
        let mut o: Vec<usize> = (0..n).collect();
        // higher dimensions first, so their pivots clear lower columns
        o.sort_by(|&a, &b| prep.dims[b].cmp(&prep.dims[a]).then(a.cmp(&b)));
        o
    } else {
        (0..n).collect()
    };
    let mut scratch = Vec::new();
    for j in order {
        if cleared[j] {
            continue;
        }
        let mut col = std::mem::take(&mut cols[j]);
        while let Some(&(low, c)) = col.last() {
            let k = pivot_of_row[low as usize];
            if k == NONE {
                break;
            }
            let pc = cols[k as usize].last().unwrap().1;
            let f = ((c as u64 * inv_mod(pc, p) as u64) % p as u64) as u32;
            axpy(&col, p - f, &cols[k as usize], p, &mut scratch);
            std::mem::swap(&mut col, &mut scratch);
        }
        if let Some(&(low, _)) = col.last() {
            pivot_of_row[low as usize] = j as u32;
            if opts.clearing {
                cleared[low as usize] = true;
                cols[low as usize].clear();
            }
        }
        cols[j] = col;
    }
    let mut pairs = Vec::new();
    for j in 0..n {
        if let Some(&(low, _)) = cols[j].last() {
            let (b, d) = (prep.values[low as usize], prep.values[j]);
            if !(opts.drop_zero && b == d) {
                pairs.push(PersistencePair {
                    dim: prep.dims[low as usize],
                    birth: b,
                    death: d,
                });
            }
        } else if prep.dims[j] <= max_dim && pivot_of_row[j] == NONE {
            pairs.push(PersistencePair {
                dim: prep.dims[j],
                birth: prep.values[j],
                death: f64::INFINITY,
            });
        }
    }
    Ok(PersistenceDiagram::new(max_dim, pairs))
}
