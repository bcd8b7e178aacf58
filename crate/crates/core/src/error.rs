use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate t = {t} lies outside the domain [0, {t_max}]")]
    Domain { t: f64, t_max: f64 },

    #[error("tabulated warp cannot be evaluated at t = {t} (supported range [{lo}, {hi}])")]
    UnsupportedPoint { t: f64, lo: f64, hi: f64 },

    #[error("warp vanishes at t = {t}; curvature and slice data are singular there")]
    SingularPoint { t: f64 },

    #[error("area A = {a} must be positive in the differential inequalities")]
    NonPositiveArea { a: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("extremal path is empty: mass m0 = {m0} leaves no room below y0^2 = {y0_sq}")]
    EmptyPath { m0: f64, y0_sq: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
