use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("times must satisfy {0}")]
    TimeOrder(String),

    #[error("x = {x} outside support: 1 + x*eta = {value} < 0")]
    OutsideSupport { x: f64, value: f64 },

    #[error("cannot parse number {0:?}")]
    Parse(String),

    #[error("branch of the square root is ambiguous at z = {0}")]
    BranchAmbiguous(String),

    #[error("atom weight {weight} at {location} outside [0, 1]")]
    AtomWeight { location: f64, weight: f64 },

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("series: {0}")]
    Series(String),

    #[error("{identity} fails at n = {n}: residual {residual:e}")]
    IdentityFailed {
        identity: String,
        n: usize,
        residual: f64,
    },

    #[error("conditional moment of order {n} is not a monic polynomial: {detail}")]
    NotPolynomial { n: usize, detail: String },

    #[error("{check} fails at (n, m) = ({n}, {m}): residual {residual:e}")]
    CellFailed {
        check: String,
        n: usize,
        m: usize,
        residual: f64,
    },

    #[error("epsilon rule: {0}")]
    EpsilonRule(String),
}
