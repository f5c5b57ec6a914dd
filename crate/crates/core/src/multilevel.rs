//! Two-level agent/group dynamics.
//!
//! State is `(x, y)` with one scalar per agent and per group. Agents relax
//! toward their share `y_j / n_j` of the group store and groups collect
//! from their members:
//!
//! ```text
//! x' = -(I + 𝕃) x + A_H (A_Hᵀ A_H)⁻¹ y
//! y' =  A_Hᵀ x   - (I + 𝔾) y
//! ```
//!
//! The simplified variant drops the agent Laplacian `𝕃`; the node-group
//! variant drops both Laplacians.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::TwoLevelNetwork;
use crate::linalg::{
    general_eigenvalues, gershgorin_discs, norm_inf, rank_kernel, schur_reduce, DenseMatrix, Disc,
    Rational, Scalar,
};
use crate::sim::{integrate_linear, IntegratorConfig, Trajectory};
use crate::{Error, Result};

/// Largest system size for which the convergence rate is computed from the
/// full spectrum.
pub const MAX_SPECTRAL_DIM: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Agent-group exchange only.
    NodeGroupOnly,
    /// Agent-group exchange plus group-level Laplacian flow.
    Simplified,
    /// Agent-group exchange plus flows at both levels.
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoLevelState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TwoLevelState {
    pub fn stacked(&self) -> Vec<f64> {
        let mut s = self.x.clone();
        s.extend_from_slice(&self.y);
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityCertificate {
    /// Column discs; the first `n` belong to agents, the rest to groups.
    pub discs: Vec<Disc>,
    pub all_in_closed_left_half_plane: bool,
    /// Some disc touches the imaginary axis at the origin.
    pub tangent_at_origin: bool,
    pub kernel_dimension: usize,
    pub zero_eigenvalue_simple: bool,
}

#[derive(Clone, Debug)]
pub struct TwoLevelSystem {
    network: TwoLevelNetwork,
    variant: Variant,
    exact: DenseMatrix<Rational>,
    matrix: DenseMatrix,
}

impl TwoLevelSystem {
    pub fn build(network: TwoLevelNetwork, variant: Variant) -> Result<Self> {
        if variant != Variant::NodeGroupOnly && !network.groups().is_connected() {
            return Err(Error::GroupGraphDisconnected);
        }
        let n = network.agent_count();
        let p = network.group_count();
        let sizes = network.group_sizes();
        let mut m = DenseMatrix::<Rational>::zeros(n + p, n + p);

        let agent_block = match variant {
            Variant::Full => DenseMatrix::identity(n)
                .add(&network.agents().laplacian(None)?)?
                .neg(),
            _ => DenseMatrix::<Rational>::identity(n).neg(),
        };
        m.set_block(0, 0, &agent_block);
        for (i, &g) in network.membership().iter().enumerate() {
            m[(i, n + g)] = Rational::new(1.into(), (sizes[g] as i64).into());
            m[(n + g, i)] = Rational::from_i64(1);
        }
        let group_block = match variant {
            Variant::NodeGroupOnly => DenseMatrix::<Rational>::identity(p).neg(),
            _ => DenseMatrix::identity(p)
                .add(&network.groups().laplacian(None)?)?
                .neg(),
        };
        m.set_block(n, n, &group_block);

        if let Some(j) = m.column_sums().iter().position(|s| !num_traits::Zero::is_zero(s)) {
            return Err(Error::InvariantViolation(format!(
                "column {j} of the system matrix does not sum to zero"
            )));
        }
        let matrix = m.to_f64();
        Ok(Self {
            network,
            variant,
            exact: m,
            matrix,
        })
    }

    pub fn network(&self) -> &TwoLevelNetwork {
        &self.network
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// System matrix `M` with `state' = M state`.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    /// `M` in exact rational arithmetic.
    pub fn exact_matrix(&self) -> &DenseMatrix<Rational> {
        &self.exact
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Degree of each group in the (undirected) group graph.
    pub fn group_degrees(&self) -> Vec<usize> {
        self.network.groups().degrees()
    }

    fn require_simplified(&self) -> Result<()> {
        if self.variant == Variant::Simplified {
            Ok(())
        } else {
            Err(Error::VariantUnsupported)
        }
    }

    fn split_state<'a>(&self, x0: &'a [f64], y0: &'a [f64]) -> Result<Vec<f64>> {
        let (n, p) = (self.network.agent_count(), self.network.group_count());
        if x0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x0.len(),
            });
        }
        if y0.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: y0.len(),
            });
        }
        let mut s = x0.to_vec();
        s.extend_from_slice(y0);
        Ok(s)
    }

    /// Direction of the equilibrium line: `y_j = 1`, `x_i = 1 / n_χ(i)`.
    pub fn equilibrium_line(&self) -> Result<Vec<f64>> {
        self.require_simplified()?;
        let sizes = self.network.group_sizes();
        let mut d: Vec<f64> = self
            .network
            .membership()
            .iter()
            .map(|&g| 1.0 / sizes[g] as f64)
            .collect();
        d.extend(core::iter::repeat_n(1.0, self.network.group_count()));
        let residual = norm_inf(&self.matrix.mul_vec(&d)?);
        if residual > 1e-12 {
            return Err(Error::InvariantViolation(format!(
                "equilibrium direction residual {residual:e}"
            )));
        }
        Ok(d)
    }

    /// Equilibrium reached from `(x0, y0)`: the equilibrium line meets the
    /// invariant hyperplane `Σx + Σy = const` at
    /// `y_j = (Σx0 + Σy0) / 2p`, `x_i = y_χ(i) / n_χ(i)`.
    pub fn predicted_limit(&self, x0: &[f64], y0: &[f64]) -> Result<TwoLevelState> {
        self.require_simplified()?;
        self.split_state(x0, y0)?;
        let p = self.network.group_count();
        let total: f64 = x0.iter().sum::<f64>() + y0.iter().sum::<f64>();
        let level = total / (2.0 * p as f64);
        let sizes = self.network.group_sizes();
        Ok(TwoLevelState {
            x: self
                .network
                .membership()
                .iter()
                .map(|&g| level / sizes[g] as f64)
                .collect(),
            y: vec![level; p],
        })
    }

    /// Schur reduction of the equilibrium equations onto the group variables.
    /// For the simplified variant this is `-𝔾`, so equilibria satisfy `𝔾y = 0`.
    pub fn group_equilibrium_matrix(&self) -> Result<DenseMatrix> {
        let n = self.network.agent_count();
        let dim = self.dim();
        // Put the group block first so the agent block is the one eliminated.
        let order: Vec<usize> = (n..dim).chain(0..n).collect();
        let permuted = DenseMatrix::from_fn(dim, dim, |i, j| self.matrix[(order[i], order[j])]);
        Ok(schur_reduce(&permuted, dim - n)?.reduced)
    }

    pub fn stability_certificate(&self) -> Result<StabilityCertificate> {
        self.require_simplified()?;
        let discs = gershgorin_discs(&self.matrix)?;
        let all_in_closed_left_half_plane = discs.iter().all(|d| d.right_edge() <= 1e-12);
        let tangent_at_origin = discs.iter().any(|d| d.right_edge() == 0.0);
        let kernel_dimension = rank_kernel(&self.matrix, None).corank();
        Ok(StabilityCertificate {
            discs,
            all_in_closed_left_half_plane,
            tangent_at_origin,
            kernel_dimension,
            zero_eigenvalue_simple: kernel_dimension == 1,
        })
    }

    /// Largest real part among the nonzero eigenvalues of `M`, for systems of
    /// dimension at most [`MAX_SPECTRAL_DIM`]; `None` above that.
    pub fn convergence_rate(&self) -> Result<Option<f64>> {
        if self.dim() > MAX_SPECTRAL_DIM {
            return Ok(None);
        }
        let mut ev = general_eigenvalues(&self.matrix)?;
        ev.sort_by(|a, b| a.modulus().total_cmp(&b.modulus()));
        Ok(ev.iter().skip(1).map(|e| e.re).reduce(f64::max))
    }

    /// Integrate `state' = M state` from `(x0, y0)`; states are `x` then `y`.
    pub fn simulate(&self, x0: &[f64], y0: &[f64], config: &IntegratorConfig) -> Result<Trajectory> {
        let s0 = self.split_state(x0, y0)?;
        integrate_linear(&self.matrix, &s0, config)
    }

    pub fn split(&self, state: &[f64]) -> TwoLevelState {
        let n = self.network.agent_count();
        TwoLevelState {
            x: state[..n].to_vec(),
            y: state[n..].to_vec(),
        }
    }
}
