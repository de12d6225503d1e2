use core::fmt;

/// Errors raised by the model, kernel and condition evaluators.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A real-valued argument lies outside its admissible domain.
    Domain {
        /// Name of the offending argument.
        name: &'static str,
        /// The rejected value.
        value: f64,
    },
    /// A dispatch threshold outside `1..=max`.
    ThresholdOutOfRange {
        /// The rejected threshold.
        n: u32,
        /// Largest admissible threshold for this operation.
        max: u32,
    },
    /// An increment-type quantity was requested with zero slack seats.
    ZeroSlack,
    /// Market parameters violate an invariant.
    InvalidParams(&'static str),
    /// The closed form is only derived for a configuration not in use.
    Unsupported(&'static str),
    /// The function has no sign change on the searched bracket.
    NoSignChange {
        /// Lower end of the bracket.
        lo: f64,
        /// Upper end of the bracket.
        hi: f64,
    },
    /// The exponential bound holds for every positive mean, so no root exists.
    NoPositiveRoot {
        /// Threshold for which the root was requested.
        n: u32,
    },
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { name, value } => write!(f, "{name} = {value} is outside its domain"),
            Error::ThresholdOutOfRange { n, max } => {
                write!(f, "threshold {n} is outside 1..={max}")
            }
            Error::ZeroSlack => f.write_str("slack capacity k must be at least 1"),
            Error::InvalidParams(why) => write!(f, "invalid market parameters: {why}"),
            Error::Unsupported(why) => write!(f, "unsupported configuration: {why}"),
            Error::NoSignChange { lo, hi } => {
                write!(f, "no sign change on [{lo}, {hi}]")
            }
            Error::NoPositiveRoot { n } => {
                write!(f, "bound holds for every positive mean at n = {n}; no root")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_mean(mu: f64) -> Result<()> {
    if mu.is_finite() && mu >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "mu",
            value: mu,
        })
    }
}
