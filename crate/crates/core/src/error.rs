use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// An iterative routine did not converge within its iteration cap.
    #[error("{routine} failed to converge for a = {a}, x = {x}")]
    Convergence {
        routine: &'static str,
        a: f64,
        x: f64,
    },

    #[error("degenerate design: {0}")]
    DegenerateDesign(&'static str),

    /// The selection rule only applies when the secrecy constraint binds.
    #[error(
        "eavesdropper density {lambda_e} is below the threshold {threshold}; \
         no secrecy enhancement is needed"
    )]
    BelowThreshold { lambda_e: f64, threshold: f64 },

    #[error("selection function has no sign change: F({d_lo}) = {f_lo}, F({d_hi}) = {f_hi}")]
    NoCrossing {
        d_lo: f64,
        f_lo: f64,
        d_hi: f64,
        f_hi: f64,
    },

    /// A point sits inside the path-loss singularity at the origin.
    #[error(
        "eavesdropper at distance {distance} from the transmitter is inside the excluded region"
    )]
    ExcludedRegion { distance: f64 },

    #[error("insufficient Monte-Carlo data: {0}")]
    InsufficientData(&'static str),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }

    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::NoCrossing { .. })
    }
}
