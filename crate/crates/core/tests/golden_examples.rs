//! Published worked examples: the signed 4-cycle and the signed K4.

mod common;

use common::{cycle4, k4, CYCLE4_SIGNS, K4_SIGNS};
use netdyn_core::equilibria::{
    corank_one_test, signed_tree_counts, tree_weight_sum_det, tree_weight_sum_enum, Decision,
    LocalDimension,
};
use netdyn_core::flows::PotentialFlow;
use netdyn_core::linalg::{rank_kernel, DenseMatrix};
use netdyn_core::{Rational, SignedDigraph, DEFAULT_TREE_CAP};

fn int_matrix<const C: usize>(rows: &[[i64; C]]) -> DenseMatrix<Rational> {
    DenseMatrix::from_rows(rows).unwrap().map(|&v| Rational::from_integer(v.into()))
}

fn signed_jacobian(g: netdyn_core::Digraph, signs: &[i64]) -> DenseMatrix<Rational> {
    let s = SignedDigraph::from_values(g, signs).unwrap();
    s.to_weighted::<Rational>().laplacian().neg()
}

#[test]
fn cycle4_incidence_matches_printed_matrix() {
    let a: DenseMatrix<i64> = cycle4().incidence_matrix::<Rational>().map(|v| v.to_integer().try_into().unwrap());
    let printed = DenseMatrix::from_rows(&[[1, 0, 0, -1], [-1, 1, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1]]).unwrap();
    assert_eq!(a, printed);
}

#[test]
fn k4_incidence_matches_printed_matrix() {
    let a = k4().incidence_matrix::<Rational>();
    let printed = int_matrix(&[
        [1, 0, 0, -1, 1, 0],
        [-1, 1, 0, 0, 0, 1],
        [0, -1, 1, 0, -1, 0],
        [0, 0, -1, 1, 0, -1],
    ]);
    assert_eq!(a, printed);
}

#[test]
fn cycle4_signed_jacobian_is_exact() {
    let j = signed_jacobian(cycle4(), &CYCLE4_SIGNS);
    let printed = int_matrix(&[[0, 1, 0, -1], [1, -2, 1, 0], [0, 1, 0, -1], [-1, 0, -1, 2]]);
    assert_eq!(j, printed);
}

#[test]
fn k4_signed_jacobian_is_exact() {
    let j = signed_jacobian(k4(), &K4_SIGNS);
    let printed = int_matrix(&[[1, -1, -1, 1], [-1, 1, 1, -1], [-1, 1, 1, -1], [1, -1, -1, 1]]);
    assert_eq!(j, printed);
}

#[test]
fn cycle4_kernel_is_the_plane() {
    let j = signed_jacobian(cycle4(), &CYCLE4_SIGNS).to_f64();
    let rk = rank_kernel(&j, None);
    assert_eq!((rk.rank, rk.corank()), (2, 2));
    for v in &rk.kernel {
        let mid = (v[0] + v[2]) / 2.0;
        assert!((v[1] - mid).abs() < 1e-10 && (v[3] - mid).abs() < 1e-10, "{v:?}");
    }
    // Both directions of the plane appear: (1,1,1,1) and (1,0,-1,0).
    for probe in [[1.0, 1.0, 1.0, 1.0], [1.0, 0.0, -1.0, 0.0]] {
        let proj: Vec<f64> = rk
            .kernel
            .iter()
            .map(|v| v.iter().zip(probe).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        let norm2: f64 = probe.iter().map(|x| x * x).sum();
        let captured: f64 = proj.iter().map(|c| c * c).sum();
        assert!((captured - norm2).abs() < 1e-10);
    }
}

#[test]
fn k4_kernel_is_three_dimensional() {
    let j = signed_jacobian(k4(), &K4_SIGNS).to_f64();
    let rk = rank_kernel(&j, None);
    assert_eq!((rk.rank, rk.corank()), (1, 3));
    for v in &rk.kernel {
        assert!((v[0] + v[3] - v[1] - v[2]).abs() < 1e-10);
    }
    // Every row is a multiple of (1,-1,-1,1), so that vector spans the row space.
    let normal = [1.0, -1.0, -1.0, 1.0];
    for i in 0..4 {
        let row = j.row(i);
        let c = row[0];
        for (a, b) in row.iter().zip(normal) {
            assert_eq!(*a, c * b);
        }
    }
}

#[test]
fn cycle4_tree_sums_and_counts() {
    let s = SignedDigraph::from_values(cycle4(), &CYCLE4_SIGNS).unwrap();
    let wg = s.to_weighted::<Rational>();
    assert_eq!(tree_weight_sum_enum(&wg, DEFAULT_TREE_CAP).unwrap(), Rational::from_integer(0.into()));
    assert_eq!(tree_weight_sum_det(&wg).unwrap(), Rational::from_integer(0.into()));
    let c = signed_tree_counts(&s, DEFAULT_TREE_CAP).unwrap();
    assert_eq!((c.positive, c.negative), (2, 2));
    assert_eq!(cycle4().enumerate_spanning_trees(DEFAULT_TREE_CAP).unwrap().len(), 4);
}

#[test]
fn k4_tree_counts() {
    let s = SignedDigraph::from_values(k4(), &K4_SIGNS).unwrap();
    let c = signed_tree_counts(&s, DEFAULT_TREE_CAP).unwrap();
    assert_eq!(c.total(), 16);
    assert_eq!((c.positive, c.negative), (8, 8));
    let unit = SignedDigraph::from_values(k4(), &[1; 6]).unwrap().to_weighted::<Rational>();
    assert_eq!(tree_weight_sum_enum(&unit, DEFAULT_TREE_CAP).unwrap(), Rational::from_integer(16.into()));
    assert_eq!(k4().tree_count().unwrap(), 16);
}

#[test]
fn cycle4_equilibrium_report() {
    let w: Vec<f64> = CYCLE4_SIGNS.iter().map(|&s| s as f64).collect();
    let fl = PotentialFlow::linear(cycle4(), &w).unwrap();
    let rep = corank_one_test(&fl, &[0.0; 4]).unwrap();
    assert_eq!(rep.decision, Decision::Exact);
    assert!(!rep.corank_one_certified);
    assert!(rep.cross_check_agrees);
    assert_eq!(rep.corank, 2);
    assert_eq!(rep.local_dimension, LocalDimension::Certified(2));
    assert_eq!(rep.tree_weight_sum_det.value, 0.0);
}

#[test]
fn k4_equilibrium_report() {
    let w: Vec<f64> = K4_SIGNS.iter().map(|&s| s as f64).collect();
    let fl = PotentialFlow::linear(k4(), &w).unwrap();
    let rep = corank_one_test(&fl, &[0.0; 4]).unwrap();
    assert_eq!(rep.corank, 3);
    assert_eq!(rep.local_dimension, LocalDimension::Certified(3));
    assert!(rep.cross_check_agrees);
}

#[test]
fn cycle4_off_diagonal_equilibria_carry_flow() {
    // x = (1, 0, -1, 0) lies in the kernel but is not constant.
    let w: Vec<f64> = CYCLE4_SIGNS.iter().map(|&s| s as f64).collect();
    let fl = PotentialFlow::linear(cycle4(), &w).unwrap();
    let x = [1.0, 0.0, -1.0, 0.0];
    assert_eq!(fl.rhs(&x).unwrap(), vec![0.0; 4]);
    assert!(fl.edge_flows(&x).unwrap().iter().any(|&u| u != 0.0));
    let u = fl.edge_flows(&[3.0, 5.0, 7.0, 11.0]).unwrap();
    assert_eq!(u, vec![3.0 - 5.0, 5.0 - 7.0, -(7.0 - 11.0), -(11.0 - 3.0)]);
}
