use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("edge {edge} is a self-loop on node {node}")]
    SelfLoop { edge: usize, node: usize },
    #[error("edge {edge} references node {node}, but the graph has {n} nodes")]
    NodeOutOfRange { edge: usize, node: usize, n: usize },
    #[error("edge {edge} duplicates the unordered pair of edge {first}")]
    DuplicatePair { edge: usize, first: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("spanning tree count {count} exceeds the enumeration cap {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("block split {split} is out of range for a {n}x{n} matrix")]
    InvalidSplit { split: usize, n: usize },
    #[error("block to be eliminated is singular")]
    SingularBlock,
    #[error("matrix is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("invalid sign {value} on edge {edge}, expected +1 or -1")]
    InvalidSign { edge: usize, value: i64 },
    #[error("invalid alpha {value} on node {node}, expected 0 or 1")]
    InvalidAlpha { node: usize, value: u8 },
    #[error("derivative of edge function {edge} is undefined at {at}")]
    DerivativeUndefined { edge: usize, at: f64 },
    #[error("derivative of edge function disagrees with finite differences at {at}: analytic {analytic}, numeric {numeric}")]
    DerivativeMismatch { at: f64, analytic: f64, numeric: f64 },
    #[error("type-one node count {r} must satisfy 1 <= r < {n}")]
    InvalidTypeOneCount { r: usize, n: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("group graph is disconnected")]
    GroupGraphDisconnected,
    #[error("operation is not supported for this system variant")]
    VariantUnsupported,
    #[error("state is not an equilibrium (residual {residual:e})")]
    NotAnEquilibrium { residual: f64 },
    #[error("flows with algebraic (alpha = 0) nodes are not supported here")]
    MixedAlphaUnsupported,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("adaptive step fell below {min_step:e} at t = {t}")]
    StepUnderflow { t: f64, min_step: f64 },
    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },
}
