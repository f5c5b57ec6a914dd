mod common;

use common::{cycle4, k4, path, random_connected, random_vector, rng, CYCLE4_SIGNS, K4_SIGNS};
use netdyn_core::flows::{laplacian, EdgeFunction, PotentialFlow};
use netdyn_core::linalg::{rank_kernel, DenseMatrix};
use netdyn_core::{Digraph, Error};
use proptest::prelude::*;
use rand::Rng;

fn smooth_flow(g: Digraph, seed: u64) -> PotentialFlow {
    let mut r = rng(seed);
    let functions = (0..g.edge_count())
        .map(|_| match r.gen_range(0..3) {
            0 => {
                let w: f64 = r.gen_range(0.5..2.0);
                EdgeFunction::custom(move |s| w * libm::sinh(s), move |s| w * libm::cosh(s)).unwrap()
            }
            1 => EdgeFunction::custom(|s| s + s * s * s, |s| 1.0 + 3.0 * s * s).unwrap(),
            _ => EdgeFunction::custom(libm::tanh, |s| 1.0 - libm::tanh(s).powi(2)).unwrap(),
        })
        .collect();
    let n = g.node_count();
    PotentialFlow::new(g, functions, vec![1; n]).unwrap()
}

fn graph_and_seed() -> impl Strategy<Value = (Digraph, u64)> {
    (2usize..=8, 0.0f64..0.8, any::<u64>()).prop_map(|(n, d, seed)| (random_connected(&mut rng(seed), n, d), seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn total_resource_is_conserved((g, seed) in graph_and_seed()) {
        let n = g.node_count();
        let fl = smooth_flow(g, seed);
        let x = random_vector(&mut rng(seed ^ 1), n, 1.5);
        let f = fl.rhs(&x).unwrap();
        let scale: f64 = f.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        prop_assert!(f.iter().sum::<f64>().abs() <= 1e-12 * scale);
    }

    #[test]
    fn jacobian_matches_finite_differences((g, seed) in graph_and_seed()) {
        let n = g.node_count();
        let fl = smooth_flow(g, seed);
        let x = random_vector(&mut rng(seed ^ 2), n, 1.0);
        let j = fl.jacobian(&x).unwrap();
        prop_assert!(j.asymmetry().unwrap() <= 1e-9);
        let norm_x = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h = 1e-6 * (1.0 + norm_x);
        let scale = j.max_abs().max(1.0);
        for k in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let (fp, fm) = (fl.rhs(&xp).unwrap(), fl.rhs(&xm).unwrap());
            for i in 0..n {
                let fd = (fp[i] - fm[i]) / (2.0 * h);
                prop_assert!((fd - j[(i, k)]).abs() <= 1e-6 * scale, "entry ({}, {})", i, k);
            }
        }
    }

    #[test]
    fn positive_weights_give_corank_one((g, seed) in graph_and_seed()) {
        let mut r = rng(seed ^ 3);
        let w: Vec<f64> = (0..g.edge_count()).map(|_| r.gen_range(0.1..5.0)).collect();
        let n = g.node_count();
        let fl = PotentialFlow::linear(g, &w).unwrap();
        let j = fl.jacobian(&vec![0.0; n]).unwrap();
        prop_assert_eq!(j.asymmetry().unwrap(), 0.0);
        let rk = rank_kernel(&j, None);
        prop_assert_eq!(rk.rank, n - 1);
        let v = &rk.kernel[0];
        let c = v[0];
        prop_assert!(v.iter().all(|x| (x - c).abs() < 1e-10));
    }

    #[test]
    fn constant_potential_has_no_linear_flow((g, seed) in graph_and_seed(), c in -10.0f64..10.0) {
        let w: Vec<f64> = (0..g.edge_count()).map(|k| if (seed >> (k % 64)) & 1 == 1 { 2.0 } else { -1.0 }).collect();
        let n = g.node_count();
        let fl = PotentialFlow::linear(g, &w).unwrap();
        prop_assert!(fl.edge_flows(&vec![c; n]).unwrap().iter().all(|&u| u == 0.0));
        prop_assert!(fl.rhs(&vec![c; n]).unwrap().iter().all(|&v| v == 0.0));
    }
}

#[test]
fn single_edge_flow() {
    let fl = PotentialFlow::consensus(Digraph::new(2, vec![(0, 1)]).unwrap());
    assert_eq!(fl.edge_flows(&[3.0, 1.0]).unwrap(), vec![2.0]);
}

#[test]
fn path_rhs_by_hand() {
    let fl = PotentialFlow::consensus(path(3));
    assert_eq!(fl.rhs(&[1.0, 0.0, 0.0]).unwrap(), vec![-1.0, 1.0, 0.0]);
}

#[test]
fn signed_cycle_rhs_is_first_printed_column() {
    let w: Vec<f64> = CYCLE4_SIGNS.iter().map(|&s| s as f64).collect();
    let fl = PotentialFlow::linear(cycle4(), &w).unwrap();
    assert_eq!(fl.rhs(&[1.0, 0.0, 0.0, 0.0]).unwrap(), vec![0.0, 1.0, 0.0, -1.0]);
}

#[test]
fn unit_jacobian_is_negative_laplacian_everywhere() {
    let fl = PotentialFlow::consensus(k4());
    let l = laplacian(&k4(), None).unwrap();
    for x in [[0.0; 4], [1.0, -2.0, 3.0, 0.5]] {
        assert_eq!(fl.jacobian(&x).unwrap(), l.neg());
    }
}

#[test]
fn laplacian_examples() {
    let single = laplacian(&Digraph::new(2, vec![(0, 1)]).unwrap(), None).unwrap();
    assert_eq!(single.to_rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
    let tri = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
    let expect = DenseMatrix::from_rows(&[[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]).unwrap();
    assert_eq!(laplacian(&tri, None).unwrap(), expect);
    let w: Vec<f64> = CYCLE4_SIGNS.iter().map(|&s| s as f64).collect();
    let printed = DenseMatrix::from_rows(&[
        [0.0, 1.0, 0.0, -1.0],
        [1.0, -2.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, -1.0],
        [-1.0, 0.0, -1.0, 2.0],
    ])
    .unwrap();
    assert_eq!(laplacian(&cycle4(), Some(&w)).unwrap(), printed.neg());
    let w: Vec<f64> = K4_SIGNS.iter().map(|&s| s as f64).collect();
    let j = PotentialFlow::linear(k4(), &w).unwrap().jacobian(&[0.0; 4]).unwrap();
    assert!(j.as_slice().iter().all(|v| v.abs() == 1.0));
}

#[test]
fn derivative_audit_rejects_wrong_pairs() {
    assert!(matches!(
        EdgeFunction::custom(libm::sin, libm::sin),
        Err(Error::DerivativeMismatch { .. })
    ));
    assert!(EdgeFunction::custom(libm::sin, libm::cos).is_ok());
}

#[test]
fn undefined_derivative_names_the_edge() {
    // The derivative audit only probes [-2, 2], so this passes construction.
    let partial = EdgeFunction::custom(|s| s, |s| if s > 5.0 { f64::NAN } else { 1.0 }).unwrap();
    let g = Digraph::new(2, vec![(0, 1)]).unwrap();
    let fl = PotentialFlow::new(g, vec![partial], vec![1, 1]).unwrap();
    assert_eq!(
        fl.jacobian(&[10.0, 0.0]).unwrap_err(),
        Error::DerivativeUndefined { edge: 0, at: 10.0 }
    );
}

#[test]
fn alpha_validation() {
    let fl = PotentialFlow::consensus(path(3));
    assert!(matches!(fl.clone().with_alpha(vec![1, 2, 1]), Err(Error::InvalidAlpha { .. })));
    assert!(fl.with_alpha(vec![1, 1]).is_err());
}
