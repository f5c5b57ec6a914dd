//! Heterogeneous consensus networks with dynamic and algebraic agents.
//!
//! Nodes `0..r` accumulate the resource (`y' = -(𝕃11 y + 𝕃12 z)`), nodes
//! `r..n` are pure intermediaries (`0 = 𝕃21 y + 𝕃22 z`). On a connected graph
//! `𝕃22` is nonsingular, so the constraint can be solved for `z` and the DAE
//! collapses to the explicit system `y' = -(𝕃11 - 𝕃12 𝕃22⁻¹ 𝕃21) y`.

use alloc::format;
use alloc::vec::Vec;

use crate::graph::Digraph;
use crate::linalg::{
    condition_estimate, norm_inf, schur_reduce, symmetric_eigenvalues, DenseMatrix, Lu,
};
use crate::sim::{integrate_linear, IntegratorConfig, Termination};
use crate::{Error, Result};

/// Condition number of `𝕃22` above which the input is treated as corrupt.
pub const MAX_L22_CONDITION: f64 = 1e12;
/// Eigenvalues with modulus at or below this count as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeterogeneousNetwork {
    graph: Digraph,
    r: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianBlocks {
    pub l11: DenseMatrix,
    pub l12: DenseMatrix,
    pub l21: DenseMatrix,
    pub l22: DenseMatrix,
}

impl LaplacianBlocks {
    /// `𝕃21 y + 𝕃22 z`.
    pub fn constraint_residual(&self, y: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        let a = self.l21.mul_vec(y)?;
        let b = self.l22.mul_vec(z)?;
        Ok(a.iter().zip(&b).map(|(u, v)| u + v).collect())
    }

    pub fn assemble(&self) -> DenseMatrix {
        let r = self.l11.rows();
        let n = r + self.l22.rows();
        let mut l = DenseMatrix::zeros(n, n);
        l.set_block(0, 0, &self.l11);
        l.set_block(0, r, &self.l12);
        l.set_block(r, 0, &self.l21);
        l.set_block(r, r, &self.l22);
        l
    }
}

/// Explicit form of the DAE on the dynamic variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSystem {
    /// `-(𝕃11 - 𝕃12 𝕃22⁻¹ 𝕃21)`, `r × r`.
    pub reduced_matrix: DenseMatrix,
    /// `-𝕃22⁻¹ 𝕃21`, `(n - r) × r`: `z = algebraic_map · y`.
    pub algebraic_map: DenseMatrix,
    /// Spectrum of `reduced_matrix`, ascending.
    pub eigenvalues: Vec<f64>,
}

impl ReducedSystem {
    /// Largest nonzero eigenvalue (negative), i.e. the exponential rate at
    /// which trajectories approach the equilibrium line. `None` when `r = 1`.
    pub fn spectral_gap(&self) -> Option<f64> {
        let k = self.eigenvalues.len();
        (k >= 2).then(|| self.eigenvalues[k - 2])
    }

    pub fn algebraic_state(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.algebraic_map.mul_vec(y)
    }
}

/// A consistent `(y, z)` pair; `projected` records whether a supplied `z`
/// was discarded.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsistentState {
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub projected: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DaeTrajectory {
    pub times: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub z: Vec<Vec<f64>>,
    pub termination: Termination,
}

impl DaeTrajectory {
    /// Node-ordered state `(y, z)` at sample `k`.
    pub fn full_state(&self, k: usize) -> Vec<f64> {
        let mut s = self.y[k].clone();
        s.extend_from_slice(&self.z[k]);
        s
    }

    pub fn final_state(&self) -> Vec<f64> {
        self.full_state(self.times.len() - 1)
    }
}

impl HeterogeneousNetwork {
    /// `r` dynamic nodes occupying indices `0..r`.
    pub fn new(graph: Digraph, r: usize) -> Result<Self> {
        let n = graph.node_count();
        if r == 0 || r >= n {
            return Err(Error::InvalidTypeOneCount { r, n });
        }
        if !graph.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(Self { graph, r })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn dynamic_count(&self) -> usize {
        self.r
    }

    pub fn algebraic_count(&self) -> usize {
        self.graph.node_count() - self.r
    }

    /// `𝕃ij = A_i A_jᵀ` for the row blocks `A_1` (dynamic) and `A_2`.
    pub fn blocks(&self) -> Result<LaplacianBlocks> {
        let n = self.graph.node_count();
        let r = self.r;
        let a: DenseMatrix = self.graph.incidence_matrix();
        let a1 = a.submatrix(0..r, 0..a.cols());
        let a2 = a.submatrix(r..n, 0..a.cols());
        let blocks = LaplacianBlocks {
            l11: a1.matmul(&a1.transpose())?,
            l12: a1.matmul(&a2.transpose())?,
            l21: a2.matmul(&a1.transpose())?,
            l22: a2.matmul(&a2.transpose())?,
        };
        let condition = condition_estimate(&blocks.l22)?;
        if !(condition <= MAX_L22_CONDITION) {
            return Err(Error::IllConditioned { condition });
        }
        Ok(blocks)
    }

    fn check_y(&self, y0: &[f64]) -> Result<()> {
        if y0.len() != self.r {
            return Err(Error::DimensionMismatch {
                expected: self.r,
                found: y0.len(),
            });
        }
        Ok(())
    }

    /// The unique `z0` with `𝕃21 y0 + 𝕃22 z0 = 0`.
    pub fn consistent_completion(&self, y0: &[f64]) -> Result<Vec<f64>> {
        self.check_y(y0)?;
        let blocks = self.blocks()?;
        let rhs: Vec<f64> = blocks.l21.mul_vec(y0)?.iter().map(|v| -v).collect();
        Lu::new(&blocks.l22)?.solve(&rhs)
    }

    /// Initial state for simulation. A supplied `z0` that violates the
    /// constraint is replaced by the consistent completion of `y0`.
    pub fn initialize(&self, y0: &[f64], z0: Option<&[f64]>) -> Result<ConsistentState> {
        let z = self.consistent_completion(y0)?;
        let Some(z0) = z0 else {
            return Ok(ConsistentState {
                y: y0.to_vec(),
                z,
                projected: false,
            });
        };
        if z0.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: z.len(),
                found: z0.len(),
            });
        }
        let residual = norm_inf(&self.blocks()?.constraint_residual(y0, z0)?);
        let scale = 1.0 + norm_inf(y0).max(norm_inf(z0));
        if residual <= 1e-9 * scale {
            return Ok(ConsistentState {
                y: y0.to_vec(),
                z: z0.to_vec(),
                projected: false,
            });
        }
        log::warn!("inconsistent algebraic initial values (residual {residual:e}); recomputed from y0");
        Ok(ConsistentState {
            y: y0.to_vec(),
            z,
            projected: true,
        })
    }

    /// Schur reduction of the Laplacian onto the dynamic block, with the
    /// spectral invariants checked: symmetric, negative semidefinite, and a
    /// single zero eigenvalue.
    pub fn reduce(&self) -> Result<ReducedSystem> {
        let blocks = self.blocks()?;
        let schur = schur_reduce(&blocks.assemble(), self.r)?;
        let mut reduced_matrix = schur.reduced.neg();
        // Eliminating nodes from a Laplacian leaves a Laplacian, so every row
        // sums to zero. Rebuilding the diagonal from the off-diagonal entries
        // keeps that exact instead of leaving round-off on the equilibrium line.
        let r = self.r;
        for i in 0..r {
            let off: f64 = (0..r).filter(|&j| j != i).map(|j| reduced_matrix[(i, j)]).sum();
            reduced_matrix[(i, i)] = -off;
        }
        let asymmetry = reduced_matrix.asymmetry()?;
        if asymmetry > 1e-12 * reduced_matrix.max_abs().max(1.0) {
            return Err(Error::InvariantViolation(format!(
                "reduced matrix asymmetry {asymmetry:e}"
            )));
        }
        let eigenvalues = symmetric_eigenvalues(&reduced_matrix)?;
        let largest = eigenvalues.last().copied().unwrap_or(0.0);
        if largest > ZERO_EIGENVALUE_TOL {
            return Err(Error::InvariantViolation(format!(
                "reduced matrix has positive eigenvalue {largest:e}"
            )));
        }
        let zeros = eigenvalues
            .iter()
            .filter(|l| libm::fabs(**l) <= ZERO_EIGENVALUE_TOL)
            .count();
        if zeros != 1 {
            return Err(Error::InvariantViolation(format!(
                "reduced matrix has corank {zeros}, expected 1"
            )));
        }
        Ok(ReducedSystem {
            reduced_matrix,
            algebraic_map: schur.elimination_map,
            eigenvalues,
        })
    }

    /// Integrate the reduced system from `y0` and rebuild `z(t)` at every
    /// output time.
    pub fn simulate(&self, y0: &[f64], config: &IntegratorConfig) -> Result<DaeTrajectory> {
        self.check_y(y0)?;
        let reduced = self.reduce()?;
        let tr = integrate_linear(&reduced.reduced_matrix, y0, config)?;
        let z = tr
            .states
            .iter()
            .map(|y| reduced.algebraic_state(y))
            .collect::<Result<Vec<_>>>()?;
        Ok(DaeTrajectory {
            times: tr.times,
            y: tr.states,
            z,
            termination: tr.termination,
        })
    }

    /// Limit state: every coordinate equals the mean of `y0`.
    pub fn predicted_equilibrium(&self, y0: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_y(y0)?;
        let mean = y0.iter().sum::<f64>() / self.r as f64;
        Ok((alloc::vec![mean; self.r], alloc::vec![mean; self.algebraic_count()]))
    }

    /// `[𝟙ᵀ 0; 𝕃21 𝕃22]`, which has full row rank `n - r + 1` on connected
    /// graphs: the invariant hyperplanes `Σy = k` meet the constraint manifold
    /// transversally.
    pub fn transversality_matrix(&self) -> Result<DenseMatrix> {
        let blocks = self.blocks()?;
        let n = self.graph.node_count();
        let mut m = DenseMatrix::zeros(n - self.r + 1, n);
        for j in 0..self.r {
            m[(0, j)] = 1.0;
        }
        m.set_block(1, 0, &blocks.l21);
        m.set_block(1, self.r, &blocks.l22);
        Ok(m)
    }
}
