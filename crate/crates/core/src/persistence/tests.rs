use super::*;
use crate::geometry::{meb_of_indices, PointCloud};
use crate::simplex::Simplex;
use crate::slicing::SlicedFiltration;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn triangle(with_face: bool) -> SlicedFiltration {
    let mut s = vec![
        Simplex::new(&[0]),
        Simplex::new(&[1]),
        Simplex::new(&[2]),
        Simplex::new(&[0, 1]),
        Simplex::new(&[1, 2]),
        Simplex::new(&[0, 2]),
    ];
    let mut v = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
    if with_face {
        s.push(Simplex::new(&[0, 1, 2]));
        v.push(2.0);
    }
    SlicedFiltration::new(s, v).unwrap()
}

#[test]
fn filtered_triangle() {
    let d = compute_persistence(&triangle(true), 1, 2).unwrap();
    let h0: Vec<(f64, f64)> = d.in_dim(0).map(|p| (p.birth, p.death)).collect();
    assert_eq!(h0, vec![(0.0, 1.0), (0.0, 1.0), (0.0, f64::INFINITY)]);
    let h1: Vec<(f64, f64)> = d.in_dim(1).map(|p| (p.birth, p.death)).collect();
    assert_eq!(h1, vec![(1.0, 2.0)]);
    assert_eq!(betti_at(&triangle(true), 2.0, 1).unwrap(), vec![1, 0]);
    assert_eq!(betti_at(&triangle(true), 1.0, 1).unwrap(), vec![1, 1]);
    assert_eq!(betti_at(&triangle(false), 1.0, 1).unwrap(), vec![1, 1]);
    assert_eq!(betti_at(&triangle(true), -1.0, 1).unwrap(), vec![0, 0]);
    assert_eq!(betti_at(&triangle(true), 0.5, 1).unwrap(), vec![3, 0]);
}

#[test]
fn single_vertex_and_empty() {
    let f = SlicedFiltration::new(vec![Simplex::new(&[0])], vec![0.0]).unwrap();
    let d = compute_persistence(&f, 0, 2).unwrap();
    assert_eq!(d.pairs, vec![PersistencePair { dim: 0, birth: 0.0, death: f64::INFINITY }]);
    let f = SlicedFiltration::new(vec![], vec![]).unwrap();
    assert!(compute_persistence(&f, 1, 2).unwrap().pairs.is_empty());
}

#[test]
fn rejects_non_monotone_and_bad_fields() {
    let f = SlicedFiltration::new(
        vec![Simplex::new(&[0]), Simplex::new(&[1]), Simplex::new(&[0, 1])],
        vec![0.0, 2.0, 1.0],
    )
    .unwrap();
    match compute_persistence(&f, 1, 2) {
        Err(Error::NonMonotone { face, coface, .. }) => {
            assert_eq!((face.as_str(), coface.as_str()), ("{1}", "{0,1}"));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(compute_persistence(&triangle(true), 1, 4), Err(Error::NotPrime(4))));
    let missing = SlicedFiltration::new(vec![Simplex::new(&[0]), Simplex::new(&[0, 1])], vec![0.0, 1.0]).unwrap();
    assert!(compute_persistence(&missing, 1, 2).is_err());
}

#[test]
fn drop_zero_and_csv_json_round_trip() {
    let f = SlicedFiltration::new(
        vec![Simplex::new(&[0]), Simplex::new(&[1]), Simplex::new(&[0, 1])],
        vec![0.0, 1.0, 1.0],
    )
    .unwrap();
    let keep = compute_persistence(&f, 0, 2).unwrap();
    assert_eq!(keep.pairs.len(), 2);
    let drop = compute_persistence_with(&f, 0, PersistenceOptions { drop_zero: true, ..Default::default() }).unwrap();
    assert_eq!(drop.pairs.len(), 1);
    let d = compute_persistence(&triangle(true), 1, 2).unwrap();
    let csv = d.to_csv();
    assert!(csv.starts_with("dim,birth,death\n"));
    assert!(csv.contains(",inf\n"));
    assert_eq!(PersistenceDiagram::from_csv(&csv).unwrap(), d);
    let json = d.to_json();
    assert!(json.contains("\"inf\""));
    assert_eq!(PersistenceDiagram::from_json(&json).unwrap(), d);
    assert!(PersistenceDiagram::from_csv("dim,birth,death\n0,1,x\n").is_err());
}

/// Čech filtration of a small random cloud with values rounded up to a
/// coarse grid, so that many values tie.
fn coarse_cech(seed: u64, n: usize) -> SlicedFiltration {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
    let c = PointCloud::new(&pts).unwrap();
    let mut s = Vec::new();
    for a in 0..n as u32 {
        s.push(Simplex::new(&[a]));
        for b in a + 1..n as u32 {
            s.push(Simplex::new(&[a, b]));
            for e in b + 1..n as u32 {
                s.push(Simplex::new(&[a, b, e]));
            }
        }
    }
    let v = s
        .iter()
        .map(|x| (meb_of_indices(&c, x.vertices()).radius * 8.0).ceil() / 8.0)
        .collect();
    SlicedFiltration::new(s, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagram_matches_betti_numbers(seed in any::<u64>(), n in 2usize..9) {
        let f = coarse_cech(seed, n);
        let d = compute_persistence(&f, 1, 2).unwrap();
        let mut grid: Vec<f64> = f.values().to_vec();
        grid.push(-1.0);
        grid.push(100.0);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        for &r in &grid {
            let b = betti_at(&f, r, 1).unwrap();
            prop_assert_eq!(b, vec![d.bar_count(0, r), d.bar_count(1, r)]);
        }
    }

    #[test]
    fn invariant_under_tie_permutation_field_and_clearing(seed in any::<u64>(), n in 2usize..9) {
        let f = coarse_cech(seed, n);
        let base = compute_persistence(&f, 1, 2).unwrap();
        let mut idx: Vec<usize> = (0..f.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let g = SlicedFiltration::new(
            idx.iter().map(|&i| f.simplices()[i]).collect(),
            idx.iter().map(|&i| f.values()[i]).collect(),
        ).unwrap();
        prop_assert_eq!(&compute_persistence(&g, 1, 2).unwrap(), &base);
        prop_assert_eq!(&compute_persistence(&f, 1, 3).unwrap(), &base);
        let noclear = compute_persistence_with(&f, 1, PersistenceOptions { clearing: false, ..Default::default() }).unwrap();
        prop_assert_eq!(&noclear, &base);
        let z3 = compute_persistence_with(&f, 1, PersistenceOptions { field: 3, clearing: false, ..Default::default() }).unwrap();
        prop_assert_eq!(&z3, &base);
    }
}

#[test]
fn torsion_shows_up_only_over_z2() {
    // Minimal triangulation of the projective plane: H1 = Z/2.
    let faces = [
        [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
        [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6], [3, 5, 6],
    ];
    let mut s: Vec<Simplex> = Vec::new();
    for f in faces {
        s.extend(Simplex::new(&f).faces());
    }
    s.sort_unstable();
    s.dedup();
    let v: Vec<f64> = s.iter().map(|x| x.dim() as f64).collect();
    let f = SlicedFiltration::new(s, v).unwrap();
    assert_eq!(betti_at(&f, 2.0, 2).unwrap(), vec![1, 1, 1]);
    assert_eq!(betti_at_field(&f, 2.0, 2, 3).unwrap(), vec![1, 0, 0]);
    let d2 = compute_persistence(&f, 2, 2).unwrap();
    let d3 = compute_persistence(&f, 2, 3).unwrap();
    assert_eq!(d2.in_dim(1).filter(|p| p.is_essential()).count(), 1);
    assert_eq!(d3.in_dim(1).filter(|p| p.is_essential()).count(), 0);
}
