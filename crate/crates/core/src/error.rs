use thiserror::Error;

use crate::evolution::TimeSeries;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("sample count {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("field contains non-finite samples")]
    NonFinite,

    #[error("unsupported Lp exponent {0}; expected 2, 4 or 6")]
    UnsupportedExponent(u32),

    #[error("undefined diagnostic: {0}")]
    UndefinedDiagnostic(&'static str),

    #[error("boundary contamination: |u| reaches {max_edge:.3e} in the edge band (tolerance {tolerance:.1e})")]
    BoundaryContamination { max_edge: f64, tolerance: f64 },

    #[error(
        "box too small: profile is {edge_value:.3e} at the box edge (tolerance {tolerance:.1e})"
    )]
    BoxTooSmall { edge_value: f64, tolerance: f64 },

    #[error("numerical blow-up at t = {t}")]
    NumericalBlowUp { t: f64, partial: Box<TimeSeries> },

    #[error("non-finite state produced by a step")]
    NonFiniteStep,

    #[error(
        "subcritical_bracket regime: radicand 1 - 16 C_GN^-18 f^-4 = {radicand:.6e} is negative"
    )]
    SubcriticalRegime { radicand: f64 },

    #[error("kinetic degenerate: |v|_6^6 + 16 E0 = {value:.3e} is not positive")]
    KineticDegenerate { value: f64 },

    #[error("elliptic residual expects a real-valued field (max |Im| = {max_imag:.3e})")]
    ComplexInput { max_imag: f64 },

    #[error("degenerate field: {0}")]
    DegenerateField(&'static str),

    #[error("no convergence after {iterations} iterations: {reason}")]
    NonConvergence { iterations: usize, reason: String },

    #[error("cubic precondition violated: b = {b:.6e} must be positive")]
    CubicPrecondition { b: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl LabError {
    /// Whether the failure is numerical (as opposed to a usage or input error).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            LabError::NumericalBlowUp { .. }
                | LabError::NonFiniteStep
                | LabError::NonConvergence { .. }
        )
    }
}
