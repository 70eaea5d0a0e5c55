use crate::persistence::PersistenceDiagram;
use std::collections::VecDeque;

fn linf(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn half_persistence(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Bottleneck distance between the degree-`dim` parts of two diagrams.
///
/// Essential bars are matched among themselves by sorted births; the
/// distance is infinite when their counts differ.
pub fn bottleneck_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram, dim: usize) -> f64 {
    let split = |d: &PersistenceDiagram| {
        let mut fin = Vec::new();
        let mut ess = Vec::new();
        for p in d.in_dim(dim) {
            if p.is_essential() {
                ess.push(p.birth);
            } else {
                fin.push((p.birth, p.death));
            }
        }
        ess.sort_by(f64::total_cmp);
        (fin, ess)
    };
    let (f1, e1) = split(d1);
    let (f2, e2) = split(d2);
    if e1.len() != e2.len() {
        return f64::INFINITY;
    }
    let ess = e1.iter().zip(&e2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ess.max(bottleneck_finite(&f1, &f2))
}

/// Bottleneck distance between finite diagrams given as `(birth, death)`.
///
/// Binary search over candidate costs. At cost `c` a point is heavy when its
/// half persistence exceeds `c`; light points may go to the diagonal, so a
/// matching of cost `c` exists iff the threshold graph between `P` and `Q`
/// has a matching covering every heavy point. By Mendelsohn-Dulmage this
/// holds iff the heavy points of each side can be covered separately. A pair
/// cost at least both half persistences joins two light points and never
/// changes feasibility, so only pairs below one of them are candidates.
pub fn bottleneck_finite(p: &[(f64, f64)], q: &[(f64, f64)]) -> f64 {
    let ps = by_birth(p);
    let qs = by_birth(q);
    let mut cand: Vec<f64> = vec![0.0];
    cand.extend(p.iter().chain(q).map(|&x| half_persistence(x)));
    for (a, others) in [(&ps, &qs), (&qs, &ps)] {
        for &x in a.iter() {
            let h = half_persistence(x);
            cand.extend(others[window(others, x.0, h)].iter().map(|&y| linf(x, y)).filter(|&d| d < h));
        }
    }
    cand.sort_by(f64::total_cmp);
    cand.dedup();
    let (mut lo, mut hi) = (0, cand.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if covers_heavy(&ps, &qs, cand[mid]) && covers_heavy(&qs, &ps, cand[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cand[lo]
}

fn by_birth(p: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut v = p.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

/// Indices of the points of `sorted` whose birth lies in `[b - c, b + c]`.
fn window(sorted: &[(f64, f64)], b: f64, c: f64) -> std::ops::Range<usize> {
    sorted.partition_point(|y| y.0 < b - c)..sorted.partition_point(|y| y.0 <= b + c)
}

/// Whether the threshold graph at cost `c` matches every heavy point of `a`
/// into `b`.
fn covers_heavy(a: &[(f64, f64)], b: &[(f64, f64)], c: f64) -> bool {
    let adj: Vec<Vec<u32>> = a
        .iter()
        .filter(|&&x| half_persistence(x) > c)
        .map(|&x| {
            window(b, x.0, c)
                .filter(|&j| linf(x, b[j]) <= c)
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    hopcroft_karp(&adj, b.len()) == adj.len()
}

/// Maximum matching size in a bipartite graph with `left` vertices given by
/// adjacency lists into `right` vertices.
fn hopcroft_karp(adj: &[Vec<u32>], right: usize) -> usize {
    const FREE: u32 = u32::MAX;
    let left = adj.len();
    let mut match_l = vec![FREE; left];
    let mut match_r = vec![FREE; right];
    let mut dist = vec![u32::MAX; left];
    let mut size = 0;
    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v as usize];
                if w == FREE {
                    found = true;
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u] + 1;
                    queue.push_back(w as usize);
                }
            }
        }
        if !found {
            return size;
        }
        let mut it = vec![0usize; left];
        for u in 0..left {
            if match_l[u] == FREE && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut it) {
                size += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<u32>],
    match_l: &mut [u32],
    match_r: &mut [u32],
    dist: &mut [u32],
    it: &mut [usize],
) -> bool {
    while it[u] < adj[u].len() {
        let v = adj[u][it[u]] as usize;
        it[u] += 1;
        let w = match_r[v];
        let ok = w == u32::MAX
            || (dist[w as usize] == dist[u] + 1 && augment(w as usize, adj, match_l, match_r, dist, it));
        if ok {
            match_l[u] = v as u32;
            match_r[v] = u as u32;
            return true;
        }
    }
    dist[u] = u32::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::PersistencePair;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(
            1,
            pairs
                .iter()
                .map(|&(birth, death)| PersistencePair { dim: 1, birth, death })
                .collect(),
        )
    }

    /// Exhaustive oracle: every partial matching, the rest to the diagonal.
    fn brute(p: &[(f64, f64)], q: &[(f64, f64)]) -> f64 {
        fn rec(i: usize, p: &[(f64, f64)], q: &[(f64, f64)], used: &mut Vec<bool>, acc: f64) -> f64 {
            if i == p.len() {
                return q
                    .iter()
                    .zip(used.iter())
                    .filter(|(_, u)| !**u)
                    .map(|(&x, _)| half_persistence(x))
                    .fold(acc, f64::max);
            }
            let mut best = rec(i + 1, p, q, used, acc.max(half_persistence(p[i])));
            for j in 0..q.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(rec(i + 1, p, q, used, acc.max(linf(p[i], q[j]))));
                    used[j] = false;
                }
            }
            best
        }
        rec(0, p, q, &mut vec![false; q.len()], 0.0)
    }

    /// Every pairwise cost as a candidate and the full graph on both diagonal
    /// copies.
    fn dense(p: &[(f64, f64)], q: &[(f64, f64)]) -> f64 {
        let (n, m) = (p.len(), q.len());
        let mut cand: Vec<f64> = vec![0.0];
        cand.extend(p.iter().chain(q).map(|&x| half_persistence(x)));
        cand.extend(p.iter().flat_map(|&a| q.iter().map(move |&b| linf(a, b))));
        cand.sort_by(f64::total_cmp);
        cand.into_iter()
            .find(|&c| {
                let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n + m];
                for i in 0..n {
                    adj[i].extend((0..m).filter(|&j| linf(p[i], q[j]) <= c).map(|j| j as u32));
                    if half_persistence(p[i]) <= c {
                        adj[i].push((m + i) as u32);
                    }
                }
                for j in 0..m {
                    if half_persistence(q[j]) <= c {
                        adj[n + j].push(j as u32);
                    }
                    adj[n + j].extend((0..n).map(|i| (m + i) as u32));
                }
                hopcroft_karp(&adj, n + m) == n + m
            })
            .unwrap()
    }

    fn random_diagram(rng: &mut ChaCha8Rng, max: usize) -> Vec<(f64, f64)> {
        let n = rng.gen_range(0..=max);
        (0..n)
            .map(|_| {
                let b: f64 = rng.gen_range(0.0..1.0);
                (b, b + rng.gen_range(0.0..1.0))
            })
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(bottleneck_distance(&diag(&[(0.0, 2.0)]), &diag(&[(0.0, 2.0)]), 1), 0.0);
        assert_eq!(bottleneck_distance(&diag(&[(0.0, 2.0)]), &diag(&[]), 1), 1.0);
        assert_eq!(bottleneck_distance(&diag(&[(1.0, 3.0)]), &diag(&[(1.5, 3.5)]), 1), 0.5);
        assert_eq!(bottleneck_distance(&diag(&[]), &diag(&[]), 1), 0.0);
        assert_eq!(bottleneck_distance(&diag(&[(0.0, 2.0)]), &diag(&[(0.0, 2.0)]), 0), 0.0);
        let inf = f64::INFINITY;
        assert_eq!(bottleneck_distance(&diag(&[(0.0, inf)]), &diag(&[]), 1), inf);
        assert_eq!(bottleneck_distance(&diag(&[(0.0, inf), (1.0, 2.0)]), &diag(&[(0.25, inf)]), 1), 0.5);
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let p = random_diagram(&mut rng, 4);
            let q = random_diagram(&mut rng, 6 - p.len().min(6));
            let q = &q[..q.len().min(6 - p.len())];
            assert!((bottleneck_finite(&p, q) - brute(&p, q)).abs() <= 1e-12);
        }
    }

    #[test]
    fn matches_dense_matching() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for round in 0..200 {
            let mut p = random_diagram(&mut rng, 40);
            let mut q = random_diagram(&mut rng, 40);
            if round % 2 == 0 {
                // coarse values force ties between costs
                for x in p.iter_mut().chain(q.iter_mut()) {
                    *x = ((x.0 * 8.0).round() / 8.0, (x.1 * 8.0).round() / 8.0);
                }
            }
            assert_eq!(bottleneck_finite(&p, &q), dense(&p, &q), "round {round}");
        }
    }

    proptest::proptest! {
        #[test]
        fn pseudometric(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_diagram(&mut rng, 30);
            let b = random_diagram(&mut rng, 30);
            let c = random_diagram(&mut rng, 30);
            let ab = bottleneck_finite(&a, &b);
            proptest::prop_assert_eq!(ab, bottleneck_finite(&b, &a));
            proptest::prop_assert_eq!(bottleneck_finite(&a, &a), 0.0);
            let bc = bottleneck_finite(&b, &c);
            let ac = bottleneck_finite(&a, &c);
            proptest::prop_assert!(ac <= ab + bc + 1e-9);
        }
    }
}
