use alloc::string::String;

/// Errors raised by the wiretap numerics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// A scalar argument fell outside the domain of the operation.
    #[error("`{name}` = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    /// No parameter choice satisfies the requested targets.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// An iterative numerical routine failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// A configuration violates a structural or resource constraint.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    domain: &'static str,
    ok: bool,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain,
        })
    }
}

pub(crate) fn check_probability_open(name: &'static str, p: f64) -> Result<()> {
    check_domain(name, p, "(0, 1)", p > 0.0 && p < 1.0)
}
