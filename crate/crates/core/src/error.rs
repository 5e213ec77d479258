use thiserror::Error;

/// Errors raised by the numerical modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("sobolev order {0} outside [0, 6]")]
    SobolevOrder(f64),
    #[error("invalid cutoff parameters: {0}")]
    InvalidCutoff(String),
    #[error("map degenerate: det(B) = {det:.3e} at node (k-sample {theta_index}, radial {radial_index})")]
    MapDegenerate {
        det: f64,
        theta_index: usize,
        radial_index: usize,
    },
    #[error("boundary degenerate: |d_theta x| = {0:.3e}")]
    BoundaryDegenerate(f64),
    #[error("boundary curve is not simple: winding number {winding} at probe {probe}")]
    NotSimple { probe: usize, winding: i64 },
    #[error("coefficient not elliptic: min eigenvalue {0:.3e}")]
    NotElliptic(f64),
    #[error("solver did not converge in {iterations} iterations (relative residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("solver breakdown after {0} iterations")]
    Breakdown(usize),
    #[error("fundamental solution needs r > 0, got {0}")]
    NonPositiveRadius(f64),
    #[error("mollified potential is only available for the identity map")]
    MollifierNeedsIdentity,
    #[error("potential target outside the admissible region: {0}")]
    QuadratureTarget(String),
    #[error("det drift {drift:.3e} exceeds tolerance {tolerance:.3e} at t = {t}")]
    DetDrift { drift: f64, tolerance: f64, t: f64 },
    #[error("Taylor condition violated (c0 = {c0:.4e}) at t = {t}")]
    TaylorViolated { c0: f64, t: f64 },
    #[error("Taylor condition violated; bound unavailable (c0 = {0:.4e})")]
    BoundUnavailable(f64),
    #[error("timestep {dt} exceeds stability limit {limit:.4e}")]
    Timestep { dt: f64, limit: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("config error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidGrid(_)
                | Error::InvalidCutoff(_)
                | Error::Parameter(_)
                | Error::Timestep { .. }
                | Error::Config { .. }
                | Error::Io(_)
                | Error::Format(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
