use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{what}: argument {value} outside domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The root finder was given an interval whose endpoints do not straddle a root.
    #[error("bracket [{lo}, {hi}] has no sign change (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A defining equation has no root in its admissible range.
    #[error("{what}: no solution ({reason})")]
    NoSolution { what: &'static str, reason: String },

    /// The feedback scheme cannot be run at the requested operating point.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The result is positive but below the smallest positive double.
    #[error("{what} underflows: ln value {ln_value}")]
    Underflow { what: &'static str, ln_value: f64 },

    #[error("{what} failed to converge: {reason}")]
    Convergence { what: &'static str, reason: String },

    /// Invalid simulator or sweep configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }

    /// Short machine-readable tag used in CSV status columns.
    pub fn status_tag(&self) -> String {
        match self {
            Error::Domain { what, .. } => format!("infeasible:domain:{what}"),
            Error::Bracket { .. } => "infeasible:bracket".to_string(),
            Error::NoSolution { what, .. } => format!("infeasible:no-solution:{what}"),
            Error::Infeasible(_) => "infeasible:scheme".to_string(),
            Error::Underflow { what, .. } => format!("underflow:{what}"),
            Error::Convergence { what, .. } => format!("infeasible:convergence:{what}"),
            Error::Config(_) => "infeasible:config".to_string(),
        }
    }
}
