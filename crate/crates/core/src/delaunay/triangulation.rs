//! Incremental Bowyer–Watson triangulation in dimension 2 or 3.
//!
//! The triangulation is closed with a vertex at infinity: every convex hull
//! facet carries one infinite cell, so the cell complex triangulates the
//! sphere and every cell has exactly `d+1` neighbors.

use super::predicates::{in_circumsphere, orient};
use crate::geometry::{distance, support_ball};
use std::collections::HashMap;

pub(crate) const INF: u32 = u32::MAX;
const PAD: u32 = u32::MAX - 1;

#[derive(Clone, Copy, Debug)]
struct Cell {
    v: [u32; 4],
    n: [u32; 4],
}

pub(crate) struct Triangulation<'a> {
    coords: &'a [f64],
    d: usize,
    cells: Vec<Cell>,
    alive: Vec<bool>,
    free: Vec<u32>,
    mark: Vec<u32>,
    epoch: u32,
    hint: usize,
    rng: u64,
    facet_map: HashMap<[u32; 3], (u32, u8)>,
}

impl<'a> Triangulation<'a> {
    /// Starts from `d+1` affinely independent points.
    pub(crate) fn new(coords: &'a [f64], d: usize, simplex: &[u32]) -> Self {
        assert!(d == 2 || d == 3);
        assert_eq!(simplex.len(), d + 1);
        let mut t = Triangulation {
            coords,
            d,
            cells: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            mark: Vec::new(),
            epoch: 0,
            hint: 0,
            rng: 0x9e37_79b9_7f4a_7c15,
            facet_map: HashMap::new(),
        };
        let mut v = [INF; 4];
        v[..=d].copy_from_slice(simplex);
        if t.orient_of(&v[..=d], None) < 0.0 {
            v.swap(0, 1);
        }
        let mut all = vec![v];
        for i in 0..=d {
            let mut w = v;
            w[i] = INF;
            let (a, b) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            w.swap(a, b);
            all.push(w);
        }
        let ids: Vec<u32> = all
            .iter()
            .map(|&v| t.alloc(Cell { v, n: [INF; 4] }))
            .collect();
        t.link(&ids);
        t.hint = ids[0] as usize;
        t
    }

    #[inline]
    fn pt(&self, v: u32) -> &'a [f64] {
        let i = v as usize * self.d;
        &self.coords[i..i + self.d]
    }

    fn alloc(&mut self, cell: Cell) -> u32 {
        if let Some(i) = self.free.pop() {
            self.cells[i as usize] = cell;
            self.alive[i as usize] = true;
            i
        } else {
            self.cells.push(cell);
            self.alive.push(true);
            self.mark.push(0);
            (self.cells.len() - 1) as u32
        }
    }

    fn is_infinite(&self, c: usize) -> bool {
        self.cells[c].v[..=self.d].contains(&INF)
    }

    fn next_rand(&mut self) -> u64 {
        self.rng ^= self.rng << 13;
        self.rng ^= self.rng >> 7;
        self.rng ^= self.rng << 17;
        self.rng
    }

    /// Orientation of a finite vertex tuple, optionally with one slot
    /// replaced by point `p`.
    fn orient_of(&self, v: &[u32], replace: Option<(usize, u32)>) -> f64 {
        let mut pts: [&[f64]; 4] = [&[]; 4];
        for (i, &x) in v.iter().enumerate() {
            let x = match replace {
                Some((s, p)) if s == i => p,
                _ => x,
            };
            pts[i] = self.pt(x);
        }
        orient(&pts[..v.len()])
    }

    /// Facet matching over a set of cells; facets are keyed by their sorted
    /// vertex ids.
    fn link(&mut self, ids: &[u32]) {
        self.facet_map.clear();
        let d = self.d;
        for &c in ids {
            for j in 0..=d {
                let key = self.facet_key(c as usize, j);
                if let Some((o, oj)) = self.facet_map.remove(&key) {
                    self.cells[c as usize].n[j] = o;
                    self.cells[o as usize].n[oj as usize] = c;
                } else {
                    self.facet_map.insert(key, (c, j as u8));
                }
            }
        }
    }

    fn facet_key(&self, c: usize, skip: usize) -> [u32; 3] {
        let mut key = [PAD; 3];
        let mut k = 0;
        for (j, &v) in self.cells[c].v[..=self.d].iter().enumerate() {
            if j != skip {
                key[k] = v;
                k += 1;
            }
        }
        key[..k].sort_unstable();
        key
    }

    fn conflicts(&self, c: usize, p: u32) -> bool {
        let d = self.d;
        let cell = &self.cells[c];
        let pp = self.pt(p);
        if let Some(s) = cell.v[..=d].iter().position(|&v| v == INF) {
            let mut pts: [&[f64]; 4] = [&[]; 4];
            for i in 0..=d {
                pts[i] = if i == s { pp } else { self.pt(cell.v[i]) };
            }
            let o = orient(&pts[..=d]);
            if o > 0.0 {
                return true;
            }
            if o < 0.0 {
                return false;
            }
            // On the hull facet's hyperplane: inside its circumball.
            let facet: Vec<&[f64]> = (0..=d)
                .filter(|&i| i != s)
                .map(|i| self.pt(cell.v[i]))
                .collect();
            match support_ball(&facet) {
                Some(b) => distance(&b.center, pp) < b.radius * (1.0 - 1e-12),
                None => false,
            }
        } else {
            let mut pts: [&[f64]; 4] = [&[]; 4];
            for i in 0..=d {
                pts[i] = self.pt(cell.v[i]);
            }
            in_circumsphere(&pts[..=d], &cell.v[..=d], pp, p)
        }
    }

    /// Visibility walk from the last created cell towards `p`.
    fn locate(&mut self, p: u32) -> Option<usize> {
        let d = self.d;
        let mut c = self.hint;
        if !self.alive[c] {
            c = self.alive.iter().position(|&a| a)?;
        }
        if let Some(s) = self.cells[c].v[..=d].iter().position(|&v| v == INF) {
            c = self.cells[c].n[s] as usize;
        }
        let limit = self.cells.len() + 16;
        'walk: for _ in 0..limit {
            let start = (self.next_rand() % (d as u64 + 1)) as usize;
            for t in 0..=d {
                let i = (start + t) % (d + 1);
                if self.orient_of(&self.cells[c].v[..=d], Some((i, p))) < 0.0 {
                    c = self.cells[c].n[i] as usize;
                    if self.is_infinite(c) {
                        return Some(c);
                    }
                    continue 'walk;
                }
            }
            return Some(c);
        }
        None
    }

    /// Inserts point `p`; returns false when no conflicting cell exists,
    /// which only happens for a point coinciding with an existing vertex.
    pub(crate) fn insert(&mut self, p: u32) -> bool {
        let d = self.d;
        let start = match self.locate(p) {
            Some(c) if self.conflicts(c, p) => c,
            _ => match (0..self.cells.len()).find(|&c| self.alive[c] && self.conflicts(c, p)) {
                Some(c) => c,
                None => return false,
            },
        };
        self.epoch += 1;
        let cm = 2 * self.epoch;
        let nm = cm + 1;
        let mut cavity = vec![start];
        self.mark[start] = cm;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for i in 0..=d {
                let nb = self.cells[c].n[i] as usize;
                if self.mark[nb] == cm || self.mark[nb] == nm {
                    continue;
                }
                if self.conflicts(nb, p) {
                    self.mark[nb] = cm;
                    cavity.push(nb);
                    stack.push(nb);
                } else {
                    self.mark[nb] = nm;
                }
            }
        }
        // (cavity cell, slot, outer cell, outer back-slot)
        let mut boundary: Vec<(usize, usize, u32, usize)> = Vec::new();
        loop {
            boundary.clear();
            let mut grow = None;
            'scan: for &c in &cavity {
                for i in 0..=d {
                    let nb = self.cells[c].n[i] as usize;
                    if self.mark[nb] == cm {
                        continue;
                    }
                    let v = &self.cells[c].v[..=d];
                    if !v.contains(&INF) && self.orient_of(v, Some((i, p))) <= 0.0 {
                        grow = Some(nb);
                        break 'scan;
                    }
                    let back = (0..=d)
                        .find(|&j| self.cells[nb].n[j] as usize == c)
                        .expect("adjacency is symmetric");
                    boundary.push((c, i, nb as u32, back));
                }
            }
            match grow {
                Some(nb) => {
                    self.mark[nb] = cm;
                    cavity.push(nb);
                }
                None => break,
            }
        }
        let fresh: Vec<(Cell, u32, usize)> = boundary
            .iter()
            .map(|&(c, i, outer, back)| {
                let mut v = self.cells[c].v;
                v[i] = p;
                let mut n = [INF; 4];
                n[i] = outer;
                (Cell { v, n }, outer, back)
            })
            .collect();
        for &c in &cavity {
            self.alive[c] = false;
            self.free.push(c as u32);
        }
        let mut ids = Vec::with_capacity(fresh.len());
        for (cell, outer, back) in fresh {
            let id = self.alloc(cell);
            self.cells[outer as usize].n[back] = id;
            ids.push(id);
        }
        // Link the new cells among themselves across facets through `p`.
        self.facet_map.clear();
        for &c in &ids {
            let cu = c as usize;
            let ps = self.cells[cu].v[..=d].iter().position(|&v| v == p).unwrap();
            for j in 0..=d {
                if j == ps {
                    continue;
                }
                let key = self.facet_key(cu, j);
                if let Some((o, oj)) = self.facet_map.remove(&key) {
                    self.cells[cu].n[j] = o;
                    self.cells[o as usize].n[oj as usize] = c;
                } else {
                    self.facet_map.insert(key, (c, j as u8));
                }
            }
        }
        self.hint = ids
            .iter()
            .map(|&c| c as usize)
            .find(|&c| !self.is_infinite(c))
            .unwrap_or(ids[0] as usize);
        true
    }

    /// Finite cells as vertex tuples.
    pub(crate) fn finite_cells(&self) -> Vec<Vec<u32>> {
        (0..self.cells.len())
            .filter(|&c| self.alive[c] && !self.is_infinite(c))
            .map(|c| self.cells[c].v[..=self.d].to_vec())
            .collect()
    }

    /// Vertices on the convex hull.
    pub(crate) fn hull_vertices(&self) -> Vec<u32> {
        let mut h: Vec<u32> = (0..self.cells.len())
            .filter(|&c| self.alive[c] && self.is_infinite(c))
            .flat_map(|c| self.cells[c].v[..=self.d].to_vec())
            .filter(|&v| v != INF)
            .collect();
        h.sort_unstable();
        h.dedup();
        h
    }

    /// Structural self-check: symmetric adjacency, positive finite cells,
    /// and hull facets seen from inside.
    #[cfg(test)]
    pub(crate) fn check(&self) -> Result<(), String> {
        let d = self.d;
        for c in 0..self.cells.len() {
            if !self.alive[c] {
                continue;
            }
            let cell = self.cells[c];
            for i in 0..=d {
                let nb = cell.n[i] as usize;
                if !self.alive[nb] || !(0..=d).any(|j| self.cells[nb].n[j] as usize == c) {
                    return Err(format!("broken adjacency at cell {c}"));
                }
            }
            if let Some(s) = cell.v[..=d].iter().position(|&v| v == INF) {
                let inner = self.cells[cell.n[s] as usize];
                let apex = inner.v[..=d]
                    .iter()
                    .copied()
                    .find(|v| !cell.v[..=d].contains(v))
                    .unwrap();
                if self.orient_of(&cell.v[..=d], Some((s, apex))) >= 0.0 {
                    return Err(format!("infinite cell {c} misoriented"));
                }
            } else if self.orient_of(&cell.v[..=d], None) <= 0.0 {
                return Err(format!("cell {c} not positively oriented"));
            }
        }
        Ok(())
    }
}
