//! Potential-driven flows `α ∘ x' = -A f(Aᵀx)`.
//!
//! Each edge carries a scalar function of the potential difference across it
//! (tail minus head). Linear edges give the weighted Laplacian flow
//! `x' = -A W Aᵀ x`; unit weights give the consensus flow `x' = -𝕃x`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Digraph;
use crate::linalg::DenseMatrix;
use crate::{Error, Result};

const PROBE_SEED: u64 = 42;
const PROBE_COUNT: usize = 5;
const PROBE_RANGE: f64 = 2.0;
const PROBE_REL_TOL: f64 = 1e-5;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Flowrate law of one edge.
#[derive(Clone)]
pub enum EdgeFunction {
    /// `f(s) = w s`.
    Linear(f64),
    Custom { f: ScalarFn, df: ScalarFn },
}

impl fmt::Debug for EdgeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeFunction::Linear(w) => f.debug_tuple("Linear").field(w).finish(),
            EdgeFunction::Custom { .. } => f.write_str("Custom"),
        }
    }
}

impl EdgeFunction {
    /// Nonlinear edge law with its analytic derivative.
    ///
    /// The derivative is audited against central differences at five
    /// pseudo-random points in `[-2, 2]` (fixed seed), with tolerance
    /// `1e-5 · max(1, |f'(s)|)`.
    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
        for _ in 0..PROBE_COUNT {
            let s: f64 = rng.gen_range(-PROBE_RANGE..PROBE_RANGE);
            let analytic = df(s);
            let h = 1e-5 * (1.0 + libm::fabs(s));
            let numeric = (f(s + h) - f(s - h)) / (2.0 * h);
            let ok = analytic.is_finite()
                && numeric.is_finite()
                && libm::fabs(analytic - numeric) <= PROBE_REL_TOL * libm::fabs(analytic).max(1.0);
            if !ok {
                return Err(Error::DerivativeMismatch {
                    at: s,
                    analytic,
                    numeric,
                });
            }
        }
        Ok(EdgeFunction::Custom {
            f: Arc::new(f),
            df: Arc::new(df),
        })
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            EdgeFunction::Linear(w) => w * s,
            EdgeFunction::Custom { f, .. } => f(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            EdgeFunction::Linear(w) => *w,
            EdgeFunction::Custom { df, .. } => df(s),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, EdgeFunction::Linear(_))
    }
}

#[derive(Clone, Debug)]
pub struct PotentialFlow {
    graph: Digraph,
    functions: Vec<EdgeFunction>,
    alpha: Vec<u8>,
}

impl PotentialFlow {
    pub fn new(graph: Digraph, functions: Vec<EdgeFunction>, alpha: Vec<u8>) -> Result<Self> {
        if functions.len() != graph.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.edge_count(),
                found: functions.len(),
            });
        }
        if alpha.len() != graph.node_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.node_count(),
                found: alpha.len(),
            });
        }
        if let Some((node, &value)) = alpha.iter().enumerate().find(|(_, &a)| a > 1) {
            return Err(Error::InvalidAlpha { node, value });
        }
        Ok(Self {
            graph,
            functions,
            alpha,
        })
    }

    /// Linear flow `x' = -A W Aᵀ x` with every node dynamic.
    pub fn linear(graph: Digraph, weights: &[f64]) -> Result<Self> {
        let n = graph.node_count();
        let functions = weights.iter().map(|&w| EdgeFunction::Linear(w)).collect();
        Self::new(graph, functions, vec![1; n])
    }

    /// Consensus flow `x' = -𝕃x`.
    pub fn consensus(graph: Digraph) -> Self {
        let weights = vec![1.0; graph.edge_count()];
        Self::linear(graph, &weights).expect("unit weights match edge count")
    }

    pub fn with_alpha(self, alpha: Vec<u8>) -> Result<Self> {
        Self::new(self.graph, self.functions, alpha)
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn edge_functions(&self) -> &[EdgeFunction] {
        &self.functions
    }

    /// Per-node coefficient: 1 for differential nodes, 0 for algebraic ones.
    pub fn alpha(&self) -> &[u8] {
        &self.alpha
    }

    pub fn all_dynamic(&self) -> bool {
        self.alpha.iter().all(|&a| a == 1)
    }

    pub fn is_linear(&self) -> bool {
        self.functions.iter().all(EdgeFunction::is_linear)
    }

    /// Weights of a linear flow.
    pub fn linear_weights(&self) -> Option<Vec<f64>> {
        self.functions
            .iter()
            .map(|f| match f {
                EdgeFunction::Linear(w) => Some(*w),
                EdgeFunction::Custom { .. } => None,
            })
            .collect()
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.graph.node_count() {
            return Err(Error::DimensionMismatch {
                expected: self.graph.node_count(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `Aᵀx`: tail potential minus head potential for each edge.
    pub fn potential_differences(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        Ok(self.graph.edges().iter().map(|&(t, h)| x[t] - x[h]).collect())
    }

    /// Edge flowrates `u_j = f_j((Aᵀx)_j)`.
    pub fn edge_flows(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .potential_differences(x)?
            .iter()
            .zip(&self.functions)
            .map(|(&s, f)| f.eval(s))
            .collect())
    }

    /// `F(x) = -A f(Aᵀx)`. Entries at nodes with `α_i = 0` are algebraic
    /// residuals that must vanish rather than derivatives.
    pub fn rhs(&self, x: &[f64]) -> Result<Vec<f64>> {
        let u = self.edge_flows(x)?;
        let mut out = vec![0.0; self.graph.node_count()];
        for (&(t, h), uj) in self.graph.edges().iter().zip(u) {
            out[t] -= uj;
            out[h] += uj;
        }
        Ok(out)
    }

    /// `f_j'((Aᵀx)_j)` for every edge: the diagonal of `W`.
    pub fn edge_derivatives(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.potential_differences(x)?
            .iter()
            .zip(&self.functions)
            .enumerate()
            .map(|(edge, (&s, f))| {
                let d = f.derivative(s);
                if d.is_finite() {
                    Ok(d)
                } else {
                    Err(Error::DerivativeUndefined { edge, at: s })
                }
            })
            .collect()
    }

    /// `F'(x) = -A W Aᵀ` with `W_j = f_j'((Aᵀx)_j)`.
    pub fn jacobian(&self, x: &[f64]) -> Result<DenseMatrix> {
        let w = self.edge_derivatives(x)?;
        Ok(self.graph.laplacian(Some(&w))?.neg())
    }
}

/// Weighted Laplacian `A W Aᵀ`; `D - C` for unit weights.
pub fn laplacian(g: &Digraph, weights: Option<&[f64]>) -> Result<DenseMatrix> {
    g.laplacian(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4_signed() -> PotentialFlow {
        let g = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        PotentialFlow::linear(g, &[1.0, 1.0, -1.0, -1.0]).unwrap()
    }

    fn path3() -> Digraph {
        Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn single_edge_flow() {
        let fl = PotentialFlow::consensus(Digraph::new(2, vec![(0, 1)]).unwrap());
        assert_eq!(fl.edge_flows(&[3.0, 1.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn signed_cycle_flows() {
        let (a, b, c, d) = (1.5, -2.0, 0.25, 7.0);
        let u = cycle4_signed().edge_flows(&[a, b, c, d]).unwrap();
        assert_eq!(u, vec![a - b, b - c, -(c - d), -(d - a)]);
    }

    #[test]
    fn constant_state_is_stationary() {
        let fl = cycle4_signed();
        assert_eq!(fl.rhs(&[2.0; 4]).unwrap(), vec![0.0; 4]);
        assert_eq!(fl.edge_flows(&[2.0; 4]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn signed_cycle_rhs_first_column() {
        let f = cycle4_signed().rhs(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(f, vec![0.0, 1.0, 0.0, -1.0]);
    }

    #[test]
    fn path_rhs() {
        let f = PotentialFlow::consensus(path3()).rhs(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(f, vec![-1.0, 1.0, 0.0]);
    }

    #[test]
    fn unit_jacobian_is_negative_laplacian() {
        let fl = PotentialFlow::consensus(path3());
        let l = laplacian(&path3(), None).unwrap();
        assert_eq!(fl.jacobian(&[0.3, -4.0, 9.0]).unwrap(), l.neg());
    }

    #[test]
    fn laplacian_examples() {
        let e = Digraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(
            laplacian(&e, None).unwrap().to_rows(),
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]]
        );
        let tri = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(
            laplacian(&tri, None).unwrap().to_rows(),
            vec![
                vec![2.0, -1.0, -1.0],
                vec![-1.0, 2.0, -1.0],
                vec![-1.0, -1.0, 2.0]
            ]
        );
        assert!(laplacian(&tri, Some(&[1.0])).is_err());
    }

    #[test]
    fn custom_derivative_audit() {
        assert!(EdgeFunction::custom(libm::sinh, libm::cosh).is_ok());
        assert!(matches!(
            EdgeFunction::custom(libm::sinh, libm::sinh),
            Err(Error::DerivativeMismatch { .. })
        ));
    }

    #[test]
    fn undefined_derivative_at_probe() {
        let f = EdgeFunction::custom(|s| s * s * s, |s| 3.0 * s * s).unwrap();
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        // Valid construction; an edge law whose derivative blows up at a
        // specific point is caught when the Jacobian is requested there.
        let bad = EdgeFunction::Custom {
            f: Arc::new(|s: f64| s),
            df: Arc::new(|s: f64| if s == 1.0 { f64::NAN } else { 1.0 }),
        };
        let fl = PotentialFlow::new(g.clone(), vec![bad], vec![1, 1]).unwrap();
        assert_eq!(
            fl.jacobian(&[1.0, 0.0]),
            Err(Error::DerivativeUndefined { edge: 0, at: 1.0 })
        );
        let ok = PotentialFlow::new(g, vec![f], vec![1, 1]).unwrap();
        assert!(ok.jacobian(&[1.0, 0.0]).is_ok());
    }

    #[test]
    fn alpha_validation() {
        let fl = PotentialFlow::consensus(path3());
        assert_eq!(
            fl.clone().with_alpha(vec![1, 2, 1]).unwrap_err(),
            Error::InvalidAlpha { node: 1, value: 2 }
        );
        assert!(fl.with_alpha(vec![1, 0]).is_err());
    }
}
