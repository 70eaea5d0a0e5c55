use super::{distance, PointCloud};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const LEAF_SIZE: usize = 12;
/// Above this dimension queries fall back to brute force.
pub const KD_MAX_DIM: usize = 8;

/// Neighbor candidate ordered by `(distance, index)`.
#[derive(Clone, Copy, PartialEq)]
struct Cand {
    dist: f64,
    idx: usize,
}

impl Eq for Cand {}

impl Ord for Cand {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Node {
    lo: Vec<f64>,
    hi: Vec<f64>,
    kind: NodeKind,
}

enum NodeKind {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: Box<Node>, right: Box<Node> },
}

/// Exact kd-tree over a point cloud. Each node keeps the tight bounding
/// box of its points for pruning.
pub struct KdTree<'a> {
    cloud: &'a PointCloud,
    order: Vec<usize>,
    root: Node,
}

impl<'a> KdTree<'a> {
    pub fn new(cloud: &'a PointCloud) -> Self {
        let mut order: Vec<usize> = (0..cloud.len()).collect();
        let root = build(cloud, &mut order, 0);
        KdTree { cloud, order, root }
    }

    /// The `j` nearest cloud points to `x` as `(index, distance)`, sorted by
    /// distance with ties broken by ascending index.
    pub fn knn(&self, x: &[f64], j: usize) -> Vec<(usize, f64)> {
        let mut heap = BinaryHeap::with_capacity(j + 1);
        if j > 0 {
            self.search(&self.root, x, j, &mut heap);
        }
        let mut v = heap.into_vec();
        v.sort_unstable();
        v.into_iter().map(|c| (c.idx, c.dist)).collect()
    }

    fn search(&self, node: &Node, x: &[f64], j: usize, heap: &mut BinaryHeap<Cand>) {
        if heap.len() == j {
            let worst = heap.peek().unwrap().dist;
            // Boxes whose bound ties the current worst are still visited:
            // they may hold a smaller index at equal distance.
            if box_lower_bound(x, &node.lo, &node.hi) > worst * (1.0 + 1e-12) {
                return;
            }
        }
        match &node.kind {
            NodeKind::Leaf { start, end } => {
                for &i in &self.order[*start..*end] {
                    let c = Cand {
                        dist: distance(x, self.cloud.point(i)),
                        idx: i,
                    };
                    if heap.len() < j {
                        heap.push(c);
                    } else if c < *heap.peek().unwrap() {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            NodeKind::Split {
                axis,
                value,
                left,
                right,
            } => {
                let (first, second) = if x[*axis] <= *value {
                    (left, right)
                } else {
                    (right, left)
                };
                self.search(first, x, j, heap);
                self.search(second, x, j, heap);
            }
        }
    }
}

fn box_lower_bound(x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let mut s = 0.0;
    for t in 0..x.len() {
        let g = if x[t] < lo[t] {
            lo[t] - x[t]
        } else if x[t] > hi[t] {
            x[t] - hi[t]
        } else {
            0.0
        };
        s += g * g;
    }
    s.sqrt()
}

fn build(cloud: &PointCloud, idx: &mut [usize], offset: usize) -> Node {
    let dim = cloud.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for &i in idx.iter() {
        for (t, &v) in cloud.point(i).iter().enumerate() {
            lo[t] = lo[t].min(v);
            hi[t] = hi[t].max(v);
        }
    }
    let axis = (0..dim)
        .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
        .unwrap();
    // Small or fully coincident sets become leaves.
    if idx.len() <= LEAF_SIZE || hi[axis] - lo[axis] <= 0.0 {
        return Node {
            lo,
            hi,
            kind: NodeKind::Leaf {
                start: offset,
                end: offset + idx.len(),
            },
        };
    }
    let mid = idx.len() / 2;
    idx.select_nth_unstable_by(mid, |&a, &b| {
        cloud.point(a)[axis].total_cmp(&cloud.point(b)[axis])
    });
    let value = cloud.point(idx[mid])[axis];
    let (left_idx, right_idx) = idx.split_at_mut(mid);
    let left = build(cloud, left_idx, offset);
    let right = build(cloud, right_idx, offset + mid);
    Node {
        lo,
        hi,
        kind: NodeKind::Split {
            axis,
            value,
            left: Box::new(left),
            right: Box::new(right),
        },
    }
}

/// Exhaustive `j` nearest neighbors; the reference the kd-tree must match.
pub fn knn_brute_force(cloud: &PointCloud, x: &[f64], j: usize) -> Vec<(usize, f64)> {
    let mut all: Vec<Cand> = cloud
        .points()
        .enumerate()
        .map(|(idx, p)| Cand {
            dist: distance(x, p),
            idx,
        })
        .collect();
    let j = j.min(all.len());
    if j == 0 {
        return Vec::new();
    }
    if j < all.len() {
        all.select_nth_unstable(j - 1);
        all.truncate(j);
    }
    all.sort_unstable();
    all.into_iter().map(|c| (c.idx, c.dist)).collect()
}

/// Nearest-neighbor backend chosen by dimension.
pub enum NeighborIndex<'a> {
    Tree(KdTree<'a>),
    Brute(&'a PointCloud),
}

impl<'a> NeighborIndex<'a> {
    /// kd-tree for `dim <= 8`, brute force above.
    pub fn new(cloud: &'a PointCloud) -> Self {
        if cloud.dim() <= KD_MAX_DIM && cloud.len() > LEAF_SIZE {
            NeighborIndex::Tree(KdTree::new(cloud))
        } else {
            NeighborIndex::Brute(cloud)
        }
    }

    pub fn cloud(&self) -> &PointCloud {
        match self {
            NeighborIndex::Tree(t) => t.cloud,
            NeighborIndex::Brute(c) => c,
        }
    }

    /// Checked kNN query.
    pub fn knn_query(&self, x: &[f64], j: usize) -> Result<Vec<(usize, f64)>> {
        let cloud = self.cloud();
        super::check_dim(cloud.dim(), x.len())?;
        if j == 0 || j > cloud.len() {
            return Err(Error::NeighborCountOutOfRange { j, n: cloud.len() });
        }
        Ok(self.knn(x, j))
    }

    pub(crate) fn knn(&self, x: &[f64], j: usize) -> Vec<(usize, f64)> {
        match self {
            NeighborIndex::Tree(t) => t.knn(x, j),
            NeighborIndex::Brute(c) => knn_brute_force(c, x, j),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn three() -> PointCloud {
        PointCloud::new(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap()
    }

    #[test]
    fn knn_examples() {
        let c = three();
        let idx = NeighborIndex::new(&c);
        assert_eq!(idx.knn_query(&[1.0, 0.0], 2).unwrap(), vec![(0, 1.0), (2, 1.0)]);
        assert_eq!(
            idx.knn_query(&[0.0, 0.0], 3).unwrap(),
            vec![(0, 0.0), (1, 1.0), (2, 2.0)]
        );
        assert_eq!(idx.knn_query(&[0.0, 1.0], 1).unwrap(), vec![(1, 0.0)]);
        assert!(idx.knn_query(&[0.0, 0.0], 4).is_err());
        assert!(idx.knn_query(&[0.0, 0.0], 0).is_err());
        assert!(idx.knn_query(&[0.0], 1).is_err());
    }

    #[test]
    fn ties_on_grid() {
        // Integer grid: many exact distance ties.
        let pts: Vec<Vec<f64>> = (0..10)
            .flat_map(|i| (0..10).map(move |j| vec![i as f64, j as f64]))
            .collect();
        let c = PointCloud::new(&pts).unwrap();
        let t = KdTree::new(&c);
        for q in [[4.5, 4.5], [0.0, 0.0], [3.0, 7.0], [-1.0, 5.0]] {
            for j in [1, 4, 9, 37, 100] {
                assert_eq!(t.knn(&q, j), knn_brute_force(&c, &q, j));
            }
        }
    }

    proptest! {
        #[test]
        fn kdtree_matches_full_sort(
            pts in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 1..200),
            q in prop::collection::vec(-12.0f64..12.0, 3),
            j in 1usize..50,
        ) {
            let c = PointCloud::new(&pts).unwrap();
            let j = j.min(c.len());
            let t = KdTree::new(&c);
            prop_assert_eq!(t.knn(&q, j), knn_brute_force(&c, &q, j));
        }
    }
}
