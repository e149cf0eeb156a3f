use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The requested computation exceeds a size guard. Guards can be lifted
    /// with the `PARTFN_CAPACITY` environment variable.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("kind mismatch: {0} vs {1}")]
    KindMismatch(String, String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("degenerate stability LP: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Work budget (number of configurations enumerated) for the exhaustive engines.
pub const DEFAULT_WORK_BUDGET: u64 = 1 << 24;

/// Effective work budget: `PARTFN_CAPACITY` overrides the default; the value
/// `unlimited` disables the guard.
pub fn work_budget() -> u64 {
    match std::env::var("PARTFN_CAPACITY") {
        Ok(v) if v.eq_ignore_ascii_case("unlimited") => u64::MAX,
        Ok(v) => v.trim().parse().unwrap_or(DEFAULT_WORK_BUDGET),
        Err(_) => DEFAULT_WORK_BUDGET,
    }
}

pub(crate) fn check_budget(what: &str, work: f64) -> Result<()> {
    let budget = work_budget();
    if work > budget as f64 {
        return Err(Error::Capacity(format!(
            "{what} needs ~{work:.3e} configurations, budget is {budget} (set PARTFN_CAPACITY)"
        )));
    }
    Ok(())
}
