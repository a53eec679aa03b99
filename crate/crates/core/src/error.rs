use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("carrier space of dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("truncation leakage {leakage:.3e} exceeds threshold {threshold:.3e}")]
    Leakage { leakage: f64, threshold: f64 },

    #[error("norm drift {drift:.3e} exceeds tolerance {tolerance:.3e}")]
    NormDrift { drift: f64, tolerance: f64 },

    #[error("energy drift {drift:.3e} exceeds tolerance {tolerance:.3e}")]
    EnergyDrift { drift: f64, tolerance: f64 },

    #[error("point lies outside the chart domain: {0}")]
    Domain(String),

    #[error("step size collapsed to {step:.3e} at t = {t}")]
    StepCollapse { t: f64, step: f64 },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("family {family} does not match representation {rep}")]
    FamilyMismatch { family: String, rep: String },

    #[error("unknown chain label `{0}`")]
    UnknownChain(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("tolerance exceeded: {0}")]
    Tolerance(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics (leakage, drift, step collapse)
    /// rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Leakage { .. }
                | Error::NormDrift { .. }
                | Error::EnergyDrift { .. }
                | Error::StepCollapse { .. }
                | Error::Tolerance(_)
                | Error::NotHermitian(_)
        )
    }
}
