use thiserror::Error;

/// Errors raised by the geometry, catalog, horizon, diagnostics and shooting code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} is outside the open domain ({lo}, {hi})")]
    OutsideDomain { point: f64, lo: f64, hi: f64 },

    #[error("profile is not positive at r = {r} (W = {value})")]
    NonPositiveProfile { r: f64, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no positive horizon radius: {0}")]
    NoRealRoot(String),

    #[error("{operation} is not defined for {kind}")]
    UnsupportedKind { operation: &'static str, kind: String },

    #[error("surface gravity {kappa} lies outside [{lo}, {hi}) ({hint})")]
    KappaOutOfRange { kappa: f64, lo: f64, hi: f64, hint: &'static str },

    #[error("maximal surface gravity {0} is below the de Sitter value 1")]
    SubDeSitterSurfaceGravity(f64),

    #[error("unknown horizon label `{0}`")]
    UnknownHorizon(String),

    #[error("level {t} is outside the potential range ({lo}, {hi})")]
    LevelOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("branch {0} is empty for this model")]
    EmptyBranch(&'static str),

    #[error("potential vanished at s = {s} before the integration finished")]
    HorizonCrossing { s: f64 },

    #[error("step size {0} is too small")]
    StepUnderflow(f64),

    #[error("constraint drift {drift:e} at s = {s} exceeds tolerance {tolerance:e}")]
    ConstraintDrift { s: f64, drift: f64, tolerance: f64 },

    #[error("root finder failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
