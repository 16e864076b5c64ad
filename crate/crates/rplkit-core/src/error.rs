use core::fmt;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Two points are farther apart than the local projection supports.
    ProjectionOutOfRange { separation_m: f64, limit_m: f64 },
    /// A pattern has no half-power crossing (e.g. backlobe above 0.5).
    IllPosedPattern,
    /// The requested HPBW cannot be produced by any q in the search bracket.
    UnsolvableHpbw { hpbw_deg: f64 },
    /// No non-co-located neighbor sites exist for a sector.
    InsufficientInfrastructure,
    /// A scalar argument is outside its domain.
    Domain(&'static str),
    /// Synthetic layout rejection sampling exhausted its attempt budget.
    LayoutTooDense,
    /// No examined parameter combination can reach zero error.
    Infeasible,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::ProjectionOutOfRange { separation_m, limit_m } => write!(
                f,
                "points are {separation_m:.0} m apart, beyond the {limit_m:.0} m local projection limit"
            ),
            CoreError::IllPosedPattern => {
                write!(f, "antenna pattern has no half-power crossing")
            }
            CoreError::UnsolvableHpbw { hpbw_deg } => {
                write!(f, "no exponent q produces an HPBW of {hpbw_deg} degrees")
            }
            CoreError::InsufficientInfrastructure => {
                write!(f, "no non-co-located sites available for neighbor distance")
            }
            CoreError::Domain(what) => write!(f, "domain error: {what}"),
            CoreError::LayoutTooDense => {
                write!(f, "could not place sites with the required minimum separation")
            }
            CoreError::Infeasible => {
                write!(f, "no feasible parameter combination achieves zero error")
            }
        }
    }
}

impl core::error::Error for CoreError {}
