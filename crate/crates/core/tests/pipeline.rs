mod common;

use ndt_core::instances::{blob_bridge, parse_edge_list, write_edge_list, ResultFile};
use ndt_core::verify::PartitionViolation;
use ndt_core::{
    brute_force_gamma, compute_params, decompose, exceeds_density, filter_feasible, fractional_arboricity, generate,
    verify_certificate, verify_partition, DecomposeOptions, DensityCertificate, Family, GenSpec, MultiGraph, Outcome,
    Rational,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn k4() -> MultiGraph {
    MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[test]
fn params_examples() {
    let p = compute_params(1, 1).unwrap();
    assert_eq!((p.ell, p.d_prime), (0, 1));
    let p = compute_params(1, 4).unwrap();
    assert_eq!((p.ell, p.d_prime), (1, 5));
    let p = compute_params(2, 7).unwrap();
    assert_eq!((p.ell, p.d_prime), (2, 11));
    assert!(compute_params(0, 1).is_err());
    assert!(compute_params(1, 0).is_err());
}

#[test]
fn density_examples() {
    assert!(exceeds_density(&k4(), r(2, 1)).unwrap().is_none());
    let w = exceeds_density(&k4(), r(3, 2)).unwrap().unwrap();
    assert_eq!(w.vertices, vec![0, 1, 2, 3]);
    assert_eq!(w.density, r(2, 1));
    let edge = MultiGraph::new(2, vec![(0, 1)]).unwrap();
    assert!(exceeds_density(&edge, r(1, 1)).unwrap().is_none());
    assert_eq!(fractional_arboricity(&edge).unwrap().0, r(1, 1));
    assert_eq!(fractional_arboricity(&k4()).unwrap().0, r(2, 1));
    let triangles = MultiGraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
    assert_eq!(fractional_arboricity(&triangles).unwrap().0, r(3, 2));
    assert!(fractional_arboricity(&MultiGraph::empty(3)).is_err());
    let path = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    assert_eq!(brute_force_gamma(&path).unwrap(), r(1, 1));
    assert_eq!(brute_force_gamma(&k4()).unwrap(), r(2, 1));
}

#[test]
fn blob_bridge_splits_into_blobs() {
    let g = blob_bridge(2);
    let p = compute_params(2, 2).unwrap();
    assert_eq!(brute_force_gamma(&g).unwrap(), r(7, 3));
    assert!(filter_feasible(&g, &p));
    let rep = decompose(&g, &p, &DecomposeOptions::default()).unwrap();
    let Outcome::Forests(f) = rep.outcome else { panic!("7/3 is below 12/5") };
    common::partition_ok(&g, &f.classes, f.special_index, p.d_prime).unwrap();
    assert_eq!(rep.cores, 2);
    // the bridge is the only edge between the blobs; it lands in a tree class
    let bridge = g.edges().iter().position(|&(u, v)| (u, v) == (3, 4)).unwrap();
    assert!(!f.classes[f.special_index].contains(&bridge));
}

#[test]
fn dense_k4_certificate() {
    let p = compute_params(1, 1).unwrap();
    let rep = decompose(&k4(), &p, &DecomposeOptions::default()).unwrap();
    let Outcome::Dense(c) = rep.outcome else { panic!("K4 exceeds 4/3") };
    assert!(verify_certificate(&k4(), &p, &c));
    let json = ResultFile::from_outcome(&Outcome::Dense(c)).to_json();
    assert_eq!(json, r#"{"certificate":{"vertices":[0,1,2,3]}}"#);
}

#[test]
fn certificate_rejections() {
    let p = compute_params(1, 1).unwrap();
    let path = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    let forest = DensityCertificate { vertices: vec![0, 1, 2, 3], edge_count: 3, threshold: p.threshold() };
    assert!(!verify_certificate(&path, &p, &forest));
    let tiny = DensityCertificate { vertices: vec![0], edge_count: 0, threshold: p.threshold() };
    assert!(!verify_certificate(&k4(), &p, &tiny));
    let forged = DensityCertificate { vertices: vec![0, 1, 2], edge_count: 6, threshold: p.threshold() };
    assert!(!verify_certificate(&path, &p, &forged));
}

#[test]
fn partition_violations_are_named() {
    let p = compute_params(1, 1).unwrap();
    let tri = MultiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
    let rep = verify_partition(&tri, &p, &[vec![0, 1, 2], vec![]], 1);
    assert!(rep.violations.iter().any(|v| matches!(v, PartitionViolation::Cycle { .. })));
    let path = MultiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
    let rep = verify_partition(&path, &p, &[vec![], vec![0, 1]], 1);
    assert!(rep
        .violations
        .iter()
        .any(|v| matches!(v, PartitionViolation::Oversize { edges: 2, bound: 1, component: 0, .. })));
    assert!(verify_partition(&path, &p, &[vec![0], vec![1]], 1).is_valid());
}

#[test]
fn tampered_output_fails_verification() {
    let p = compute_params(1, 2).unwrap();
    let mut edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
    edges.push((0, 4));
    let g = MultiGraph::new(8, edges).unwrap();
    let rep = decompose(&g, &p, &DecomposeOptions::default()).unwrap();
    let Outcome::Forests(f) = rep.outcome else { panic!("a cycle with one chord is sparse") };
    assert!(verify_partition(&g, &p, &f.classes, f.special_index).is_valid());
    let mut moved = f.classes.clone();
    let e = moved[0].pop().unwrap();
    assert!(!verify_partition(&g, &p, &moved, f.special_index).is_valid());
    moved[0].push(e);
    moved[1].push(e);
    assert!(!verify_partition(&g, &p, &moved, f.special_index).is_valid());
}

#[test]
fn edge_list_round_trip() {
    let g = generate(&GenSpec { family: Family::ForestPlusNoise, n: 12, m: 20, k: 2, d: 3, seed: 11 }).unwrap();
    let text = write_edge_list(&g);
    assert_eq!(parse_edge_list(&text).unwrap(), g);
    let commented = format!("# header\n\n{text}");
    assert_eq!(parse_edge_list(&commented).unwrap(), g);
}

#[test]
fn result_file_round_trip() {
    let p = compute_params(2, 3).unwrap();
    let g = generate(&GenSpec { family: Family::RandomMultigraph, n: 10, m: 18, k: 2, d: 3, seed: 5 }).unwrap();
    let rep = decompose(&g, &p, &DecomposeOptions::default()).unwrap();
    let file = ResultFile::from_outcome(&rep.outcome);
    assert_eq!(ResultFile::parse(&file.to_json()).unwrap(), file);
}

#[test]
fn filter_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf11);
    for i in 0..300 {
        let k = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=6);
        let p = compute_params(k, d).unwrap();
        let n = rng.gen_range(2..=10);
        let fill = rng.gen_range(0.7..1.4);
        let g = common::random_instance(&mut rng, &p, n, fill, i);
        let (e, v) = common::subset_gamma(&g);
        let t = p.threshold();
        let feasible = e * t.denom() <= t.numer() * v;
        assert_eq!(filter_feasible(&g, &p), feasible, "k={k} d={d} graph {:?}", g.edges());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decompose_is_sound(k in 1usize..=3, d in 1usize..=6, n in 2usize..=11, fill in 0.5f64..1.6, seed in any::<u64>()) {
        let p = compute_params(k, d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_instance(&mut rng, &p, n, fill, seed);
        let rep = decompose(&g, &p, &DecomposeOptions::default()).unwrap();
        let (e, v) = common::subset_gamma(&g);
        let t = p.threshold();
        match rep.outcome {
            Outcome::Forests(f) => {
                prop_assert!(e * t.denom() <= t.numer() * v);
                prop_assert_eq!(f.classes.len(), k + 1);
                prop_assert!(common::partition_ok(&g, &f.classes, f.special_index, p.d_prime).is_ok());
            }
            Outcome::Dense(c) => {
                prop_assert!(e * t.denom() > t.numer() * v);
                prop_assert!(verify_certificate(&g, &p, &c));
            }
        }
    }
}
