//! Error type shared by every module of the toolkit.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the generation / transform /
/// estimation pipeline.
///
/// Variants are grouped by how a caller should react: the parameter-shaped
/// ones indicate a bad configuration (fixable before running anything), the
/// data-shaped ones indicate a condition discovered while processing samples,
/// and the I/O ones carry the offending path.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration value violates a precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An operation requiring a dyadic length was handed something else.
    #[error(
        "series length {n} is not a power of two; nearest valid lengths are {below} and {above}"
    )]
    NotPowerOfTwo {
        n: usize,
        below: usize,
        above: usize,
    },

    /// Bandwidth outside `1..=⌊(n-1)/2⌋`.
    #[error("bandwidth m={m} out of range for n={n}; valid range is 1..={max}")]
    BandwidthOutOfRange { m: usize, n: usize, max: usize },

    /// Frequency index outside `1..⌈n/2⌉` (the sine regressor degenerates at
    /// k=0 and k=n/2).
    #[error("frequency index k={k} invalid for n={n}; need 1 <= k < n/2")]
    FrequencyOutOfRange { k: usize, n: usize },

    /// `log(x²)` hit an exact zero.
    #[error("sample at index {index} is zero: log(x^2) is undefined there")]
    ZeroSample { index: usize },

    /// A sample failed the finiteness invariant.
    #[error("sample at index {index} is not finite ({value})")]
    NonFiniteSample { index: usize, value: f64 },

    /// Log-periodogram regression was left with fewer than two usable points.
    #[error("too few usable frequencies: {usable} of {m} (need at least 2)")]
    TooFewUsable { usable: usize, m: usize },

    /// Too many frequencies were skipped for the estimate to be trusted.
    #[error(
        "estimate unreliable: {skipped} of {m} frequencies skipped, above the {limit_percent}% limit"
    )]
    UnreliableEstimate {
        skipped: usize,
        m: usize,
        limit_percent: u32,
    },

    /// Bandwidth grid came out empty after clipping.
    #[error("empty bandwidth grid for n={n} with exponents ({lo_exp}, {hi_exp})")]
    EmptyGrid { n: usize, lo_exp: f64, hi_exp: f64 },

    /// Filesystem failure, tagged with the path involved.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed artifact content (CSV/JSON), tagged with path and line.
    #[error("{}:{line}: {reason}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

impl Error {
    /// Convenience constructor for [`Error::InvalidParameter`].
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Convenience constructor for [`Error::Io`].
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by a bad configuration value — the kind a
    /// caller can fix before touching any data. Used by front ends to pick
    /// exit codes.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::NotPowerOfTwo { .. }
                | Error::BandwidthOutOfRange { .. }
                | Error::FrequencyOutOfRange { .. }
                | Error::EmptyGrid { .. }
        )
    }
}
