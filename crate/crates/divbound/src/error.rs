use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside the admissible interval for an operation.
    #[error("{name} = {value} outside domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: String,
    },

    /// A root bracket did not straddle a sign change.
    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    /// An iterative routine could not reach the requested tolerance.
    #[error("accuracy target not met: achieved {achieved:e}, required {required:e}")]
    Accuracy { achieved: f64, required: f64 },

    /// An integrand produced a non-finite value at a quadrature node.
    #[error("integrand not finite at x = {node}")]
    NonFiniteEvaluation { node: f64 },

    /// A polynomial statistic that cannot define a tilted family.
    #[error("malformed statistic: {detail}")]
    MalformedStatistic { detail: String },

    /// A projection target outside the attainable mean range.
    #[error("target mean {target} outside attainable range [{lo}, {hi}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },

    /// A witness guaranteed by theory could not be located numerically.
    #[error("witness search failed: {detail}")]
    WitnessDiagnostic { detail: String },

    /// A distribution specification violating its invariants.
    #[error("invalid distribution: {detail}")]
    InvalidDistribution { detail: String },

    /// Audited distribution and reference live on incompatible supports.
    #[error("support mismatch: {detail}")]
    SupportMismatch { detail: String },

    /// An internal linear-algebra routine failed to converge.
    #[error("numerical failure: {detail}")]
    Numerical { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
