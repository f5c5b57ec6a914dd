//! Structure of the equilibrium set of potential-driven flows whose edge
//! weights may be negative.
//!
//! Near an equilibrium `x*` the Jacobian is `-A W Aᵀ` with `W_j = f_j'`. Any
//! `(n-1)`-row reduced incidence matrix `A_r` satisfies, by Cauchy–Binet,
//! `det(A_r W A_rᵀ) = Σ_T Π_{j∈T} W_j` over spanning trees `T`. The Jacobian
//! has corank one, and the equilibria form a curve through `x*`, exactly when
//! that tree-weight sum is nonzero.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::flows::PotentialFlow;
use crate::graph::{Digraph, Sign, SignedDigraph, WeightedDigraph};
use crate::linalg::{rank_kernel, rational_from_f64, row_space_basis, DenseMatrix, Rational, Scalar};
use crate::{Error, Result, DEFAULT_TREE_CAP};

/// Residual bound (∞-norm of the right-hand side) for accepting a state as an
/// equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;
/// Relative threshold for deciding "sum ≠ 0" in floating point.
pub const NUMERICAL_ZERO_REL: f64 = 1e-9;

/// Σ over spanning trees of the product of tree-edge weights, by explicit
/// enumeration.
pub fn tree_weight_sum_enum<T: Scalar>(g: &WeightedDigraph<T>, cap: u128) -> Result<T> {
    let trees = g.base().enumerate_spanning_trees(cap)?;
    Ok(trees
        .iter()
        .fold(T::zero(), |acc, t| acc + t.weight(g.weights())))
}

/// `det(A_r W A_sᵀ)` where `A_r`, `A_s` drop rows `drop_row` and `drop_col`
/// of the incidence matrix.
pub fn reduced_weighted_minor<T: Scalar>(
    g: &WeightedDigraph<T>,
    drop_row: usize,
    drop_col: usize,
) -> Result<T> {
    let n = g.base().node_count();
    let a_r: DenseMatrix<T> = g.base().reduced_incidence(drop_row)?;
    let a_s: DenseMatrix<T> = g.base().reduced_incidence(drop_col)?;
    let w = DenseMatrix::from_diagonal(g.weights());
    let m = a_r.matmul(&w)?.matmul(&a_s.transpose())?;
    debug_assert_eq!(m.rows(), n - 1);
    T::det(&m)
}

/// Tree-weight sum as the determinant of the reduced weighted Laplacian
/// (last node dropped).
pub fn tree_weight_sum_det<T: Scalar>(g: &WeightedDigraph<T>) -> Result<T> {
    let last = g.base().node_count() - 1;
    reduced_weighted_minor(g, last, last)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedTreeCounts {
    pub positive: u128,
    pub negative: u128,
}

impl SignedTreeCounts {
    pub fn total(&self) -> u128 {
        self.positive + self.negative
    }

    /// Equal counts: the tree-weight sum vanishes and the equilibrium set has
    /// dimension greater than one.
    pub fn is_degenerate(&self) -> bool {
        self.positive == self.negative
    }
}

/// Trees with an even number of negative edges are positive, odd negative.
pub fn signed_tree_counts(g: &SignedDigraph, cap: u128) -> Result<SignedTreeCounts> {
    let trees = g.base().enumerate_spanning_trees(cap)?;
    let mut counts = SignedTreeCounts {
        positive: 0,
        negative: 0,
    };
    for t in &trees {
        let negatives = t
            .edges()
            .iter()
            .filter(|&&j| g.signs()[j] == Sign::Negative)
            .count();
        if negatives % 2 == 0 {
            counts.positive += 1;
        } else {
            counts.negative += 1;
        }
    }
    Ok(counts)
}

/// A tree-weight sum in floating point, with its exact value when the
/// weights were treated as exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeWeightSum {
    pub value: f64,
    pub exact: Option<Rational>,
}

impl TreeWeightSum {
    fn from_exact(v: Rational) -> Self {
        Self {
            value: v.to_f64(),
            exact: Some(v),
        }
    }

    fn from_float(v: f64) -> Self {
        Self {
            value: v,
            exact: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    /// "sum ≠ 0" decided in exact rational arithmetic.
    Exact,
    /// Decided by `|sum| > 1e-9 · Σ|tree weight|`.
    Numerical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalDimension {
    Certified(usize),
    /// Nonlinear flow with corank ≥ 2: only a lower bound is known.
    Uncertified { at_least: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumReport {
    pub jacobian_rank: usize,
    pub corank: usize,
    /// Orthonormal basis of the Jacobian kernel.
    pub kernel_basis: Vec<Vec<f64>>,
    /// For linear flows, exact relations `c · x = 0` cutting out the kernel
    /// (reduced row echelon form of the Jacobian).
    pub kernel_relations: Option<Vec<Vec<Rational>>>,
    /// `W_j = f_j'((Aᵀx*)_j)`.
    pub edge_weights: Vec<f64>,
    /// `None` when the tree count exceeds the enumeration cap.
    pub tree_weight_sum_enum: Option<TreeWeightSum>,
    pub tree_weight_sum_det: TreeWeightSum,
    pub decision: Decision,
    pub corank_one_certified: bool,
    /// The tree-sum decision and the numerical corank agree.
    pub cross_check_agrees: bool,
    pub local_dimension: LocalDimension,
}

/// Corank-one test at `x_star` with the default enumeration cap.
pub fn corank_one_test(fl: &PotentialFlow, x_star: &[f64]) -> Result<EquilibriumReport> {
    corank_one_test_with_cap(fl, x_star, DEFAULT_TREE_CAP)
}

pub fn corank_one_test_with_cap(
    fl: &PotentialFlow,
    x_star: &[f64],
    cap: u128,
) -> Result<EquilibriumReport> {
    if !fl.all_dynamic() {
        return Err(Error::MixedAlphaUnsupported);
    }
    let graph: &Digraph = fl.graph();
    if !graph.is_connected() {
        return Err(Error::NotConnected);
    }
    let residual = crate::linalg::norm_inf(&fl.rhs(x_star)?);
    if !(residual <= EQUILIBRIUM_TOL) {
        return Err(Error::NotAnEquilibrium { residual });
    }
    let weights = fl.edge_derivatives(x_star)?;
    let jacobian = fl.jacobian(x_star)?;
    let rk = rank_kernel(&jacobian, None);
    let within_cap = graph.tree_count()? <= cap;

    let mut kernel_relations = None;
    let (tree_weight_sum_enum, tree_weight_sum_det, decision, nonzero) = if fl.is_linear() {
        let exact: Vec<Rational> = weights
            .iter()
            .map(|&w| rational_from_f64(w).ok_or(Error::NonFinite))
            .collect::<Result<_>>()?;
        let wg = WeightedDigraph::new(graph.clone(), exact)?;
        kernel_relations = Some(row_space_basis(&wg.laplacian()));
        let det = tree_weight_sum_det(&wg)?;
        let en = if within_cap {
            Some(TreeWeightSum::from_exact(tree_weight_sum_enum(&wg, cap)?))
        } else {
            None
        };
        let nonzero = !det.is_zero();
        (en, TreeWeightSum::from_exact(det), Decision::Exact, nonzero)
    } else {
        let wg = WeightedDigraph::new(graph.clone(), weights.clone())?;
        let det = tree_weight_sum_det(&wg)?;
        let magnitude = WeightedDigraph::new(
            graph.clone(),
            weights.iter().map(|w| libm::fabs(*w)).collect(),
        )?;
        let scale = tree_weight_sum_det(&magnitude)?;
        let en = if within_cap {
            Some(TreeWeightSum::from_float(tree_weight_sum_enum(&wg, cap)?))
        } else {
            None
        };
        let nonzero = libm::fabs(det) > NUMERICAL_ZERO_REL * scale;
        (en, TreeWeightSum::from_float(det), Decision::Numerical, nonzero)
    };

    let corank = rk.corank();
    let local_dimension = if nonzero {
        LocalDimension::Certified(1)
    } else if fl.is_linear() {
        // Linear flows: the equilibrium set is the kernel itself.
        LocalDimension::Certified(corank)
    } else {
        LocalDimension::Uncertified { at_least: corank }
    };
    Ok(EquilibriumReport {
        jacobian_rank: rk.rank,
        corank,
        kernel_basis: rk.kernel,
        kernel_relations,
        edge_weights: weights,
        tree_weight_sum_enum,
        tree_weight_sum_det,
        decision,
        corank_one_certified: nonzero,
        cross_check_agrees: nonzero == (corank == 1),
        local_dimension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::EdgeFunction;
    use alloc::vec;

    fn cycle4() -> Digraph {
        Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn tree_graph_sum_is_one() {
        let g = Digraph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        let wg: WeightedDigraph<Rational> = WeightedDigraph::new(g, vec![int(1); 3]).unwrap();
        assert_eq!(tree_weight_sum_enum(&wg, 10).unwrap(), int(1));
        assert_eq!(tree_weight_sum_det(&wg).unwrap(), int(1));
    }

    #[test]
    fn single_edge_det() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        let wg = WeightedDigraph::new(g, vec![int(1)]).unwrap();
        assert_eq!(tree_weight_sum_det(&wg).unwrap(), int(1));
    }

    #[test]
    fn signed_cycle_sums_vanish() {
        let s = SignedDigraph::from_values(cycle4(), &[1, 1, -1, -1]).unwrap();
        let wg = s.to_weighted::<Rational>();
        assert_eq!(tree_weight_sum_enum(&wg, 10).unwrap(), int(0));
        assert_eq!(tree_weight_sum_det(&wg).unwrap(), int(0));
        let c = signed_tree_counts(&s, 10).unwrap();
        assert_eq!((c.positive, c.negative), (2, 2));
        assert!(c.is_degenerate());
    }

    #[test]
    fn positive_triangle_counts() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let s = SignedDigraph::from_values(g, &[1, 1, 1]).unwrap();
        let c = signed_tree_counts(&s, 10).unwrap();
        assert_eq!((c.positive, c.negative), (3, 0));
    }

    #[test]
    fn minors_are_signed_cofactors() {
        let g = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let wg = WeightedDigraph::new(g, vec![int(2), int(-1), int(3), int(1), int(-2)]).unwrap();
        let sum = tree_weight_sum_enum(&wg, 100).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let minor = reduced_weighted_minor(&wg, i, j).unwrap();
                let sign = if (i + j) % 2 == 0 { int(1) } else { int(-1) };
                assert_eq!(minor, sign * sum.clone(), "drop ({i}, {j})");
            }
        }
    }

    #[test]
    fn cap_and_connectivity_errors() {
        let s = SignedDigraph::from_values(cycle4(), &[1, 1, 1, 1]).unwrap();
        assert_eq!(
            signed_tree_counts(&s, 2),
            Err(Error::CapExceeded { count: 4, cap: 2 })
        );
        let g = Digraph::new(3, vec![(0, 1)]).unwrap();
        let wg = WeightedDigraph::new(g, vec![1.0]).unwrap();
        assert_eq!(tree_weight_sum_det(&wg), Err(Error::NotConnected));
    }

    #[test]
    fn positive_linear_flow_corank_one() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let fl = PotentialFlow::linear(g, &[1.0, 2.0, 0.5]).unwrap();
        let rep = corank_one_test(&fl, &[4.0; 3]).unwrap();
        assert_eq!(rep.corank, 1);
        assert!(rep.corank_one_certified && rep.cross_check_agrees);
        assert_eq!(rep.local_dimension, LocalDimension::Certified(1));
        assert_eq!(rep.decision, Decision::Exact);
        // 1*2 + 2*0.5 + 0.5*1
        assert_eq!(rep.tree_weight_sum_det.exact, Some(Rational::new(7.into(), 2.into())));
    }

    #[test]
    fn rejects_non_equilibrium_and_mixed_alpha() {
        let fl = PotentialFlow::consensus(cycle4());
        assert!(matches!(
            corank_one_test(&fl, &[1.0, 0.0, 0.0, 0.0]),
            Err(Error::NotAnEquilibrium { .. })
        ));
        let mixed = fl.with_alpha(vec![1, 0, 1, 1]).unwrap();
        assert_eq!(
            corank_one_test(&mixed, &[0.0; 4]),
            Err(Error::MixedAlphaUnsupported)
        );
    }

    #[test]
    fn nonlinear_flow_numerical_decision() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let f = || EdgeFunction::custom(libm::sinh, libm::cosh).unwrap();
        let fl = PotentialFlow::new(g, vec![f(), f()], vec![1, 1, 1]).unwrap();
        let rep = corank_one_test(&fl, &[0.3, 0.3, 0.3]).unwrap();
        assert_eq!(rep.decision, Decision::Numerical);
        assert!(rep.corank_one_certified);
        assert_eq!(rep.corank, 1);
        assert!((rep.tree_weight_sum_det.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonlinear_degenerate_is_uncertified() {
        // f(s) = s³ has f'(0) = 0: at x* = 0 every weight vanishes.
        let g = Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let f = || EdgeFunction::custom(|s| s * s * s, |s| 3.0 * s * s).unwrap();
        let fl = PotentialFlow::new(g, vec![f(), f()], vec![1, 1, 1]).unwrap();
        let rep = corank_one_test(&fl, &[0.0; 3]).unwrap();
        assert!(!rep.corank_one_certified);
        assert_eq!(rep.corank, 3);
        assert_eq!(rep.local_dimension, LocalDimension::Uncertified { at_least: 3 });
    }
}
