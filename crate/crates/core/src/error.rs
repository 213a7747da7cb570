use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A point lies outside the coordinate domain of its space.
    #[error("point outside the domain of {space}: {detail}")]
    Domain { space: String, detail: String },
    /// A radius or probability level lies outside its admissible range.
    #[error("{what} = {value} outside [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// Inconsistent or malformed arguments.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The requested computation is not available for these inputs.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A mathematical precondition of the requested check does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Rejection sampling accepted too few proposals to be usable.
    #[error("sampler degenerate: acceptance rate {rate:.3e} below {min:.0e}")]
    SamplerDegenerate { rate: f64, min: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl Error {
    pub(crate) fn range(what: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Error::Range { what, value, lo, hi }
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

/// Checks `lo <= value <= hi` with a few ulps of slack at the ends.
pub(crate) fn check_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    let slack = 4.0 * f64::EPSILON * hi.abs().max(1.0);
    if value.is_nan() || value < lo - slack || value > hi + slack {
        Err(Error::range(what, value, lo, hi))
    } else {
        Ok(())
    }
}
