//! Error types shared across the solver modules.

use thiserror::Error;

/// Direction of a blocked transition in a reducible chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockedDirection {
    Forward,
    Backward,
}

impl std::fmt::Display for BlockedDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockedDirection::Forward => write!(f, "forward"),
            BlockedDirection::Backward => write!(f, "backward"),
        }
    }
}

/// Errors from parameter validation and the exact chain solver.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ChainError {
    #[error("{name} = {value} is not a probability (must lie in [0, 1] and be finite)")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("need at least 2 players, got {0}")]
    TooFewPlayers(usize),

    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(f64),

    #[error("state index {index} out of range [0, {max}]")]
    StateOutOfRange { index: usize, max: usize },

    #[error(
        "chain is reducible: the {direction} transition out of state {state} has probability 0"
    )]
    ReducibleChain {
        state: usize,
        direction: BlockedDirection,
    },

    #[error("cyclic chain is reducible: capital class {state} is transient")]
    ReducibleCycle { state: usize },

    #[error("distribution is not normalized: entries sum to {sum}")]
    NotNormalized { sum: f64 },

    #[error("distribution entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },

    #[error("distribution has {len} entries but the chain has {expected} states")]
    DimensionMismatch { len: usize, expected: usize },
}

/// Errors from the fairness condition solvers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FairnessError {
    #[error("no closed-form fairness condition for N = {0}; use the numeric solver")]
    UnsupportedPlayerCount(usize),

    #[error("no fair p_B2 exists in [0, 1]: the closed form evaluates to {value}")]
    ClosedFormOutOfRange { value: f64 },

    #[error("closed-form fairness condition is degenerate for these inputs (division by zero)")]
    ClosedFormDegenerate,

    #[error(
        "no fair p_B2 exists in [0, 1]: no sign change of the current \
         (J = {lo_current} at p_B2 = {lo_pb2}, J = {hi_current} at p_B2 = {hi_pb2})"
    )]
    NoSignChange {
        lo_pb2: f64,
        lo_current: f64,
        hi_pb2: f64,
        hi_current: f64,
    },

    #[error("no fair p_B2 exists: the chain is unsolvable over the whole p_B2 grid")]
    NoValidEvaluations(#[source] ChainError),

    #[error("bisection failed to reach |J| < {tolerance} (best |J| = {best})")]
    NoConvergence { tolerance: f64, best: f64 },

    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Errors from the parameter-space scanners, tagged with the offending node.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScanError {
    #[error("sweep grid must have at least 2 nodes, got {0}")]
    InvalidGrid(usize),

    #[error("solver failed at gamma = {gamma}: {source}")]
    AtGamma {
        gamma: f64,
        #[source]
        source: ChainError,
    },

    #[error("root refinement failed to reach |J| < {tolerance} (best |J| = {best})")]
    NoConvergence { tolerance: f64, best: f64 },

    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Errors from Monte Carlo configuration validation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SimConfigError {
    #[error("simulation needs at least one measured round")]
    NoRounds,

    #[error("explicit initial state has {len} flags but there are {expected} players")]
    InitialStateMismatch { len: usize, expected: usize },
}
