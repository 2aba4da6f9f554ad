use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{function}: argument {x} is outside the supported range |x| <= {limit}")]
    OutOfRange {
        function: &'static str,
        x: f64,
        limit: f64,
    },

    #[error("{function}: series did not converge within {cap} terms")]
    TermCap { function: &'static str, cap: usize },

    #[error("{function}: estimated error {estimate:e} exceeds the budget {budget:e}")]
    ErrorBudget {
        function: &'static str,
        estimate: f64,
        budget: f64,
    },

    #[error("{0}: value overflows f64")]
    Overflow(&'static str),

    #[error("tridiagonal eigenvalue iteration did not converge (order {order})")]
    Eigensolver { order: usize },

    #[error("Newton polishing of the degree-{degree} roots stalled at accuracy {achieved:e}")]
    RootPolish { degree: u32, achieved: f64 },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions: \
         estimate {estimate}, error bound {error_bound:e}"
    )]
    NonConvergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },
}

impl Error {
    /// True for errors caused by caller input rather than by numerics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidState(_) | Error::InvalidArgument(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
