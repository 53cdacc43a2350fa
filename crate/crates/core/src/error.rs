use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration would exceed its configured cap.
    #[error("budget exceeded: {what} requested {requested}, limit {limit}")]
    Budget {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// `-ln(1 - x) / x = target` has no solution in the search bracket.
    #[error("no root of -ln(1-x)/x = {target} in the open unit interval bracket")]
    NoRoot { target: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    /// A computed quantity broke a property that must hold by construction.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn check_budget(what: &'static str, requested: usize, limit: usize) -> Result<()> {
        if requested > limit {
            Err(Error::Budget {
                what,
                requested,
                limit,
            })
        } else {
            Ok(())
        }
    }
}
