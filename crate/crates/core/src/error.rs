use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The evaluation policy could not reach its accuracy target.
    #[error("accuracy target not met in {func}: {detail}")]
    Accuracy { func: &'static str, detail: String },

    #[error("integer overflow computing {0}")]
    Overflow(String),

    /// An integral that was asked for does not converge.
    #[error("divergent integral: {0}")]
    Divergence(String),

    /// The truncated tail of an integral is larger than the requested tolerance.
    #[error("tail bound {bound:e} exceeds tolerance {tolerance:e} ({context})")]
    TailTolerance {
        bound: f64,
        tolerance: f64,
        context: String,
    },

    /// Adaptive refinement ran out of its panel budget.
    #[error("refinement budget exceeded: {0}")]
    Budget(String),

    /// A parameter window of an estimate is violated.
    #[error("parameter window violated for {estimate}: {detail}")]
    Window {
        estimate: &'static str,
        detail: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn window(estimate: &'static str, detail: impl Into<String>) -> Self {
        Error::Window {
            estimate,
            detail: detail.into(),
        }
    }

    /// True for failures caused by a numeric budget rather than bad parameters.
    pub fn is_numeric_budget(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. } | Error::TailTolerance { .. } | Error::Budget(_)
        )
    }
}
