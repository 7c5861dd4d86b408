use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the numerical core can report.
///
/// Physics failures (threshold, instability, non-physical states) are
/// ordinary values: sweeps record them per grid point via [`Error::code`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// A [`SystemParams`](crate::params::SystemParams) invariant is violated.
    InvalidParams(&'static str),
    /// At or above the OPA parametric threshold: κ² + Δ² − 4C_g² is not
    /// safely positive, so the linear steady state diverges.
    ThresholdSingularity {
        /// The offending value of κ² + Δ² − 4C_g².
        denominator: f64,
    },
    /// ω_m1·ω_m2 − λ² ≤ 0: the coupled-oscillator potential is unbounded.
    DegenerateNormalMode,
    /// The drift matrix has an eigenvalue with real part ≥ −margin.
    UnstableSystem {
        /// Largest real part among the drift eigenvalues.
        max_real_part: f64,
    },
    /// A pivot fell below the singularity threshold.
    SingularSolve,
    /// The QR iteration hit its sweep cap.
    EigenFailure,
    /// Integrator step violates the accuracy bound dt ≤ 0.1/‖M‖₂.
    StepTooLarge {
        /// Requested step.
        dt: f64,
        /// Largest admissible step.
        bound: f64,
    },
    /// The reduced covariance is not a valid two-mode covariance matrix.
    NonPhysicalState,
    /// Matrix shapes do not fit the operation.
    Dimension(&'static str),
    /// A matrix entry is NaN or infinite.
    NonFinite,
    /// No entanglement at the lower end of a temperature bracket.
    NoEntanglementAtFloor,
    /// Still entangled at the upper end of a temperature bracket.
    NoDeathBelowCeiling,
}

impl Error {
    /// Stable numeric code written into sweep outputs; 0 is reserved for
    /// success.
    pub fn code(&self) -> u8 {
        match self {
            Error::InvalidParams(_) => 1,
            Error::ThresholdSingularity { .. } => 2,
            Error::DegenerateNormalMode => 3,
            Error::UnstableSystem { .. } => 4,
            Error::SingularSolve => 5,
            Error::EigenFailure => 6,
            Error::StepTooLarge { .. } => 7,
            Error::NonPhysicalState => 8,
            Error::Dimension(_) => 9,
            Error::NonFinite => 10,
            Error::NoEntanglementAtFloor => 11,
            Error::NoDeathBelowCeiling => 12,
        }
    }

    /// Short machine-friendly name, matching the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::ThresholdSingularity { .. } => "ThresholdSingularity",
            Error::DegenerateNormalMode => "DegenerateNormalMode",
            Error::UnstableSystem { .. } => "UnstableSystem",
            Error::SingularSolve => "SingularSolve",
            Error::EigenFailure => "EigenFailure",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::NonPhysicalState => "NonPhysicalState",
            Error::Dimension(_) => "Dimension",
            Error::NonFinite => "NonFinite",
            Error::NoEntanglementAtFloor => "NoEntanglementAtFloor",
            Error::NoDeathBelowCeiling => "NoDeathBelowCeiling",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(what) => write!(f, "invalid parameters: {what}"),
            Error::ThresholdSingularity { denominator } => write!(
                f,
                "OPA at or above parametric threshold (kappa^2 + delta^2 - 4 C_g^2 = {denominator:e})"
            ),
            Error::DegenerateNormalMode => {
                f.write_str("omega_m1 * omega_m2 - lambda^2 <= 0: no bounded steady state")
            }
            Error::UnstableSystem { max_real_part } => {
                write!(f, "drift matrix unstable (max real part {max_real_part:e})")
            }
            Error::SingularSolve => f.write_str("linear system is numerically singular"),
            Error::EigenFailure => f.write_str("eigenvalue iteration did not converge"),
            Error::StepTooLarge { dt, bound } => {
                write!(f, "step {dt:e} exceeds bound {bound:e}")
            }
            Error::NonPhysicalState => f.write_str("reduced covariance is not physical"),
            Error::Dimension(what) => write!(f, "dimension mismatch: {what}"),
            Error::NonFinite => f.write_str("matrix contains NaN or infinite entries"),
            Error::NoEntanglementAtFloor => {
                f.write_str("no entanglement at the lower temperature bound")
            }
            Error::NoDeathBelowCeiling => {
                f.write_str("entanglement persists at the upper temperature bound")
            }
        }
    }
}

impl core::error::Error for Error {}
