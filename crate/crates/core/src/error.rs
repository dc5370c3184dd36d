use thiserror::Error;

/// Errors produced by the affinity toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A text file did not parse under its declared format.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An exhaustive search would exceed its configured work budget.
    #[error("budget exceeded: {required} work items needed, budget is {budget}; {hint}")]
    BudgetExceeded {
        required: String,
        budget: u64,
        hint: String,
    },

    /// The parameters fall outside the regime an algorithm supports.
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    /// A numerical solver failed to converge or hit a singular system.
    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// The facet-recovery program has no feasible point.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Randomized rounding did not produce an accepted assignment.
    #[error("randomized rounding failed after {attempts} attempts")]
    RetryExhausted { attempts: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn budget(required: impl ToString, budget: u64, hint: impl Into<String>) -> Self {
        Error::BudgetExceeded {
            required: required.to_string(),
            budget,
            hint: hint.into(),
        }
    }
}
