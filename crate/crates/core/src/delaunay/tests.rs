use super::*;
use crate::geometry::linalg::circumcenter;
use crate::geometry::min_enclosing_ball;
use rand::Rng;

fn cloud(pts: &[[f64; 2]]) -> PointCloud {
    PointCloud::new(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn random_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    PointCloud::new(&pts).unwrap()
}

/// Independent oracle: every (d+1)-subset whose open circumball holds no
/// other point.
fn brute_force_delaunay(c: &PointCloud) -> Vec<Simplex> {
    let d = c.dim();
    let n = c.len() as u32;
    let mut out = Vec::new();
    let mut combo: Vec<u32> = (0..=d as u32).collect();
    loop {
        let pts: Vec<&[f64]> = combo.iter().map(|&i| c.point(i as usize)).collect();
        if let Some(center) = circumcenter(&pts) {
            let r = distance(&center, pts[0]);
            let empty = (0..n)
                .filter(|i| !combo.contains(i))
                .all(|i| distance(&center, c.point(i as usize)) > r * (1.0 + 1e-9));
            if empty {
                out.push(Simplex::new(&combo));
            }
        }
        // next combination
        let k = combo.len();
        let mut i = k;
        loop {
            if i == 0 {
                out.sort_unstable();
                return out;
            }
            i -= 1;
            if combo[i] < n - (k - i) as u32 {
                break;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

fn sorted_tops(dc: &DelaunayComplex) -> Vec<Simplex> {
    let mut t = dc.top_simplices();
    t.sort_unstable();
    t
}

#[test]
fn three_point_example() {
    let c = cloud(&[[0.0, 0.0], [0.0, 1.0], [2.0, 0.0]]);
    let dc = build_delaunay(&c).unwrap();
    assert_eq!(dc.counts_by_dim(), vec![3, 3, 1]);
    for v in 0..3 {
        assert_eq!(dc.alpha_of(&Simplex::new(&[v])), Some(0.0));
    }
    assert_eq!(dc.alpha_of(&Simplex::new(&[0, 1])), Some(0.5));
    // the hypotenuse is Gabriel with (0,0) on its diametral circle
    assert_eq!(dc.alpha_of(&Simplex::new(&[1, 2])), Some(0.5 * 5f64.sqrt()));
    assert!(!dc.is_degenerate());
}

#[test]
fn two_points_and_fig1_triangle() {
    let c = cloud(&[[0.0, 0.0], [2.0, 0.0]]);
    let dc = build_delaunay(&c).unwrap();
    assert!(dc.is_degenerate());
    assert_eq!(dc.alpha_of(&Simplex::new(&[0, 1])), Some(1.0));
    assert_eq!(dc.len(), 3);

    let s3 = 3f64.sqrt();
    let c = cloud(&[[0.0, 0.0], [1.0, s3], [2.1, 0.1]]);
    let dc = build_delaunay(&c).unwrap();
    let a = dc.alpha_of(&Simplex::new(&[0, 1, 2])).unwrap();
    let meb = min_enclosing_ball(&[c.point(0), c.point(1), c.point(2)]).unwrap();
    assert!((a - meb.radius).abs() < 1e-12);
    assert!((a - 1.1696).abs() < 5e-4);
}

#[test]
fn rejects_other_dimensions() {
    let c = PointCloud::new(&[vec![0.0], vec![1.0]]).unwrap();
    assert!(matches!(build_delaunay(&c), Err(Error::UnsupportedDimension { .. })));
    let c = PointCloud::new(&[vec![0.0; 4], vec![1.0; 4]]).unwrap();
    assert!(build_delaunay(&c).is_err());
}

#[test]
fn matches_brute_force_oracle() {
    for seed in 0..12 {
        for (d, n) in [(2, 50), (3, 30), (2, 7), (3, 9)] {
            let c = random_cloud(n, d, seed);
            let dc = build_delaunay(&c).unwrap();
            assert_eq!(sorted_tops(&dc), brute_force_delaunay(&c), "seed {seed} d {d} n {n}");
        }
    }
}

#[test]
fn structure_on_larger_inputs() {
    for (d, n) in [(2, 3000), (3, 1500)] {
        let c = random_cloud(n, d, 99);
        let (reps, _) = deduplicate(&c);
        let mut order = reps;
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(INSERTION_SEED));
        let (basis, _) = affine_frame(&c, &order);
        let mut tri = Triangulation::new(c.coords(), d, &basis);
        for &p in &order {
            if !basis.contains(&p) {
                assert!(tri.insert(p));
            }
        }
        tri.check().unwrap();
        // empty circumspheres, checked against every point
        for cell in tri.finite_cells() {
            let pts: Vec<&[f64]> = cell.iter().map(|&i| c.point(i as usize)).collect();
            let center = circumcenter(&pts).unwrap();
            let r = distance(&center, pts[0]);
            assert!(c.points().all(|p| distance(&center, p) >= r * (1.0 - 1e-9)));
        }
    }
}

#[test]
fn cocircular_grid() {
    let pts: Vec<[f64; 2]> = (0..12)
        .flat_map(|i| (0..9).map(move |j| [i as f64, j as f64]))
        .collect();
    let c = cloud(&pts);
    let dc = build_delaunay(&c).unwrap();
    let k = dc.counts_by_dim();
    assert_eq!(k[0] as i64 - k[1] as i64 + k[2] as i64, 1);
    // every unit square split into two right triangles
    assert_eq!(k[2], 2 * 11 * 8);
    for s in dc.top_simplices() {
        assert!((dc.alpha_of(&s).unwrap() - 0.5 * 2f64.sqrt()).abs() < 1e-12);
    }
    // cube lattice in space
    let pts: Vec<Vec<f64>> = (0..4)
        .flat_map(|i| (0..4).flat_map(move |j| (0..4).map(move |l| vec![i as f64, j as f64, l as f64])))
        .collect();
    let c = PointCloud::new(&pts).unwrap();
    let dc = build_delaunay(&c).unwrap();
    let k = dc.counts_by_dim();
    assert_eq!(k[0] as i64 - k[1] as i64 + k[2] as i64 - k[3] as i64, 1);
    let vol: f64 = dc
        .top_simplices()
        .iter()
        .map(|s| {
            let p: Vec<&[f64]> = s.vertices().iter().map(|&v| c.point(v as usize)).collect();
            predicates::orient(&p).abs() / 6.0
        })
        .sum();
    assert!((vol - 27.0).abs() < 1e-9);
}

#[test]
fn convex_position_is_a_disk() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pts: Vec<[f64; 2]> = (0..60)
        .map(|_| {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            [t.cos(), t.sin()]
        })
        .collect();
    let dc = build_delaunay(&cloud(&pts)).unwrap();
    let k = dc.counts_by_dim();
    assert_eq!(k[0] as i64 - k[1] as i64 + k[2] as i64, 1);
    assert_eq!(k[2], 58);
}

#[test]
fn alpha_properties() {
    for (d, seed) in [(2, 1), (3, 2), (2, 3)] {
        let c = random_cloud(80, d, seed);
        let dc = build_delaunay(&c).unwrap();
        for (i, s) in dc.simplices().iter().enumerate() {
            let a = dc.alpha()[i];
            for f in s.facets() {
                assert!(dc.alpha_of(&f).unwrap() <= a);
            }
            if s.dim() == 0 {
                continue;
            }
            let pts: Vec<&[f64]> = s.vertices().iter().map(|&v| c.point(v as usize)).collect();
            let center = circumcenter(&pts).unwrap();
            let r = distance(&center, pts[0]);
            let gabriel = c
                .points()
                .enumerate()
                .filter(|(j, _)| !s.vertices().contains(&(*j as u32)))
                .all(|(_, p)| distance(&center, p) > r * (1.0 + 1e-9));
            if gabriel {
                assert!((a - r).abs() < 1e-9, "{s}");
                let meb = min_enclosing_ball(&pts).unwrap();
                if (meb.radius - r).abs() < 1e-12 {
                    assert!((a - meb.radius).abs() < 1e-9);
                }
            } else {
                assert!(a > r);
            }
        }
    }
}

#[test]
fn nerve_consistency_by_grid_sampling() {
    let c = random_cloud(12, 2, 17);
    let dc = build_delaunay(&c).unwrap();
    let pitch = 0.01;
    // Witnesses of simplices with alpha <= 1 lie within [-2, 2]^2.
    let grid: Vec<[f64; 2]> = (0..=400)
        .flat_map(|i| (0..=400).map(move |j| [-2.0 + i as f64 * pitch, -2.0 + j as f64 * pitch]))
        .collect();
    let owner_dist: Vec<f64> = grid
        .iter()
        .map(|x| c.points().map(|p| distance(x, p)).fold(f64::INFINITY, f64::min))
        .collect();
    for (s, &a) in dc.simplices().iter().zip(dc.alpha()) {
        if a > 1.0 {
            continue;
        }
        let tol = 2.0 * pitch;
        let witnessed = grid.iter().zip(&owner_dist).any(|(x, &m)| {
            s.vertices().iter().all(|&v| {
                let dv = distance(x, c.point(v as usize));
                dv <= a + tol && dv <= m + tol
            })
        });
        assert!(witnessed, "{s} at alpha {a}");
    }
}

#[test]
fn degenerate_inputs() {
    let c = cloud(&[[0.0, 0.0], [2.0, 2.0], [1.0, 1.0], [3.0, 3.0]]);
    let dc = build_delaunay(&c).unwrap();
    assert!(dc.is_degenerate());
    assert_eq!(sorted_tops(&dc), vec![Simplex::new(&[0, 2]), Simplex::new(&[1, 2]), Simplex::new(&[1, 3])]);
    let s2 = 2f64.sqrt();
    assert!((dc.alpha_of(&Simplex::new(&[0, 2])).unwrap() - s2 / 2.0).abs() < 1e-15);

    let c = cloud(&[[1.0, 1.0], [1.0, 1.0]]);
    let dc = build_delaunay(&c).unwrap();
    assert_eq!(dc.alpha_of(&Simplex::new(&[0, 1])), Some(0.0));

    let pts: Vec<Vec<f64>> = random_cloud(20, 2, 4)
        .points()
        .map(|p| vec![p[0], p[1], 0.5 * p[0] - p[1]])
        .collect();
    let c = PointCloud::new(&pts).unwrap();
    let dc = build_delaunay(&c).unwrap();
    assert!(dc.is_degenerate());
    assert_eq!(dc.max_dim(), 2);
    let k = dc.counts_by_dim();
    assert_eq!(k[0] as i64 - k[1] as i64 + k[2] as i64, 1);
}

#[test]
fn duplicates_hang_off_their_first_copy() {
    let c = cloud(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.3, 0.3]]);
    let dc = build_delaunay(&c).unwrap();
    assert_eq!(dc.alpha_of(&Simplex::new(&[1, 3])), Some(0.0));
    assert!(dc.top_simplices().iter().filter(|s| s.contains(&Simplex::new(&[3]))).count() == 1);
    let k = dc.counts_by_dim();
    assert_eq!(k[0] as i64 - k[1] as i64 + k[2] as i64, 1);
}

#[test]
fn voronoi_owner_examples() {
    let c = cloud(&[[0.0, 0.0], [0.0, 1.0], [2.0, 0.0]]);
    assert_eq!(voronoi_owner(&c, &[0.1, 0.1]).unwrap(), 0);
    assert_eq!(voronoi_owner(&c, &[2.0, 0.0]).unwrap(), 2);
    let c = cloud(&[[0.0, 0.0], [0.0, 1.0]]);
    assert_eq!(voronoi_owner(&c, &[0.0, 0.5]).unwrap(), 0);
    assert_eq!(voronoi_owners(&c, &[0.0, 0.5]).unwrap(), vec![0, 1]);
}

#[test]
fn dump_format() {
    let c = cloud(&[[0.0, 0.0], [2.0, 0.0]]);
    let dc = build_delaunay(&c).unwrap();
    assert_eq!(dc.dump(), "0 0 0.0\n0 1 0.0\n1 0 1 1.0\n");
}

#[test]
fn hull_diameter_matches_exhaustive() {
    let c = random_cloud(3000, 2, 8);
    let hull = build_hull(&c).unwrap();
    let pts: Vec<Vec<f64>> = hull.iter().map(|&i| c.point(i as usize).to_vec()).collect();
    assert_eq!(PointCloud::new(&pts).unwrap().diameter(), c.diameter());
}
